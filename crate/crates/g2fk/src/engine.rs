//! Model-agnostic exact algorithms on fully enumerated finite groups:
//! closures, centralizers, normalizers, central series, Frattini and derived
//! subgroups, order statistics, bounded normal-subgroup enumeration, and the
//! generator-pair homomorphism test.
//!
//! Elements are dense integer ids in [0, p^6); the multiplication law is
//! dispatched per model. Subgroups carry both a sorted id list and a bitset
//! so membership tests and set algebra stay cheap in the exhaustive scans.

use crate::chevalley::{
    decode_word, encode_word, enumerate_u, eval_word, normal_form, ChevError, Mat8, ROOTS,
};
use crate::field::Fp;
use crate::poly::{PolyError, PolyModel};
use rayon::prelude::*;
use std::collections::{BTreeMap, VecDeque};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Chev(#[from] ChevError),
    #[error("carrier has {0} elements, expected p^6 = {1}")]
    CarrierSize(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Poly,
    Chevalley,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Poly => "poly",
            Model::Chevalley => "chevalley",
        }
    }
}

/// Fixed-capacity bitset over element ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        self.words[id as usize / 64] >> (id % 64) & 1 == 1
    }

    /// Returns true if the bit was newly set.
    #[inline]
    pub fn insert(&mut self, id: u32) -> bool {
        let w = &mut self.words[id as usize / 64];
        let mask = 1u64 << (id % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A subgroup as a closed, sorted id set with a generating set.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub elems: Vec<u32>,
    pub bits: Bitset,
    pub gens: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        self.bits.contains(id)
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&e| other.contains(e))
    }

    pub fn same_set(&self, other: &Subgroup) -> bool {
        self.elems == other.elems
    }

    /// FNV-1a over the sorted id list; canonical identity for dedup.
    pub fn key(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for &e in &self.elems {
            h ^= e as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

enum Law {
    Poly(PolyModel),
    /// Per-id matrices; products peel back to words on the fly.
    Chev { mats: Vec<Mat8> },
    /// Full p^6 x p^6 table plus the per-id word list (p = 3 only).
    ChevDense { mul: Vec<u32> },
}

/// Conjugacy class data, computed once per table on demand.
pub struct Classes {
    pub class_of: Vec<u32>,
    pub members: Vec<Vec<u32>>,
}

pub struct GroupTable {
    fp: Fp,
    pub model: Model,
    pub n: usize,
    law: Law,
    pub gens: [u32; 6],
    inv: Vec<u32>,
    classes: OnceLock<Classes>,
}

impl GroupTable {
    /// Builds the fully enumerated table for the requested model.
    pub fn build(fp: Fp, model: Model) -> Result<Self, EngineError> {
        let p = fp.p();
        let n = (p as usize).pow(6);
        match model {
            Model::Poly => {
                let m = PolyModel::new(fp)?;
                let mut gens = [0u32; 6];
                for i in 1..=6 {
                    gens[i - 1] = m.encode(&m.generator(i, 1));
                }
                let inv = (0..n as u32)
                    .into_par_iter()
                    .map(|id| m.encode(&m.s_inverse(&m.decode(id))))
                    .collect();
                Ok(Self {
                    fp,
                    model,
                    n,
                    law: Law::Poly(m),
                    gens,
                    inv,
                    classes: OnceLock::new(),
                })
            }
            Model::Chevalley => {
                let mats: Vec<Mat8> = (0..n as u32)
                    .into_par_iter()
                    .map(|id| eval_word(fp, &decode_word(p, id)))
                    .collect();
                let mut gens = [0u32; 6];
                for (i, g) in gens.iter_mut().enumerate() {
                    let mut w = [0u32; 6];
                    w[i] = 1;
                    *g = encode_word(p, &w);
                }
                let law = if p == 3 {
                    // Dense table by dynamic programming: strip the last
                    // generator factor of b, so only n*6 products need the
                    // full matrix-and-peel path.
                    let gen_mul: Vec<[u32; 6]> = (0..n as u32)
                        .map(|a| {
                            let mut row = [0u32; 6];
                            for (i, &r) in ROOTS.iter().enumerate() {
                                let m = mats[a as usize]
                                    .mul(&crate::chevalley::root_matrix(fp, r, 1), fp);
                                row[i] = encode_word(p, &normal_form(fp, &m).expect("in U"));
                            }
                            row
                        })
                        .collect();
                    let mut mul = vec![0u32; n * n];
                    for a in 0..n {
                        mul[a * n + 0] = a as u32;
                    }
                    for b in 1..n as u32 {
                        let w = decode_word(p, b);
                        let last = (0..6).rev().find(|&i| w[i] != 0).expect("nonzero");
                        let mut prev = w;
                        prev[last] -= 1;
                        let prev_id = encode_word(p, &prev);
                        for a in 0..n {
                            mul[a * n + b as usize] =
                                gen_mul[mul[a * n + prev_id as usize] as usize][last];
                        }
                    }
                    Law::ChevDense { mul }
                } else {
                    Law::Chev { mats }
                };
                let inv = match &law {
                    Law::ChevDense { mul } => (0..n)
                        .map(|a| {
                            mul[a * n..(a + 1) * n]
                                .iter()
                                .position(|&x| x == 0)
                                .expect("row contains identity") as u32
                        })
                        .collect(),
                    _ => (0..n as u32)
                        .into_par_iter()
                        .map(|id| {
                            let m = eval_word(fp, &decode_word(p, id)).inv_unipotent(fp);
                            encode_word(p, &normal_form(fp, &m).expect("in U"))
                        })
                        .collect(),
                };
                Ok(Self {
                    fp,
                    model,
                    n,
                    law,
                    gens,
                    inv,
                    classes: OnceLock::new(),
                })
            }
        }
    }

    /// Independent carrier certificate: breadth-first closure over the six
    /// generators reaches exactly p^6 distinct elements.
    pub fn certify_carrier(&self) -> Result<(), EngineError> {
        match self.model {
            Model::Chevalley => {
                let words = enumerate_u(self.fp)?;
                if words.len() != self.n {
                    return Err(EngineError::CarrierSize(words.len(), self.n));
                }
            }
            Model::Poly => {
                let sub = self.closure(&self.gens);
                if sub.order() != self.n {
                    return Err(EngineError::CarrierSize(sub.order(), self.n));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn fp(&self) -> Fp {
        self.fp
    }

    /// The underlying polynomial model, when this is a poly-law table.
    pub fn poly_model(&self) -> Option<&PolyModel> {
        match &self.law {
            Law::Poly(m) => Some(m),
            _ => None,
        }
    }

    pub fn identity(&self) -> u32 {
        0
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.law {
            Law::Poly(m) => m.encode(&m.s_multiply(&m.decode(a), &m.decode(b))),
            Law::Chev { mats } => {
                let m = mats[a as usize].mul(&mats[b as usize], self.fp);
                encode_word(
                    self.fp.p(),
                    &normal_form(self.fp, &m).expect("product stays in U"),
                )
            }
            Law::ChevDense { mul } => mul[a as usize * self.n + b as usize],
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    #[inline]
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    #[inline]
    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, x: u32, e: u32) -> u32 {
        let mut acc = self.identity();
        for _ in 0..e {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// The standard generator x_i(lambda) as an id, i in 1..=6.
    pub fn generator(&self, i: usize, lambda: i64) -> u32 {
        let l = self.fp.reduce(lambda);
        self.pow(self.gens[i - 1], l)
    }

    /// Parameters (p_1, .., p_6) with id = x_1(p_1) x_2(p_2) ... x_6(p_6)
    /// in the model's fixed generator order.
    pub fn factor(&self, id: u32) -> [u32; 6] {
        match &self.law {
            Law::Poly(m) => m.factor(&m.decode(id)),
            _ => decode_word(self.fp.p(), id),
        }
    }

    /// Smallest subgroup containing the given ids (breadth-first closure).
    pub fn closure(&self, gens: &[u32]) -> Subgroup {
        let mut bits = Bitset::new(self.n);
        let mut elems = Vec::new();
        let mut queue = VecDeque::new();
        bits.insert(self.identity());
        elems.push(self.identity());
        queue.push_back(self.identity());
        for &g in gens {
            if bits.insert(g) {
                elems.push(g);
                queue.push_back(g);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if bits.insert(y) {
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        elems.sort_unstable();
        Subgroup {
            elems,
            bits,
            gens: gens.to_vec(),
        }
    }

    /// The whole carrier as a subgroup value.
    pub fn whole(&self) -> Subgroup {
        let mut bits = Bitset::new(self.n);
        for id in 0..self.n as u32 {
            bits.insert(id);
        }
        Subgroup {
            elems: (0..self.n as u32).collect(),
            bits,
            gens: self.gens.to_vec(),
        }
    }

    /// Greedy small generating set for an already-computed subgroup.
    pub fn reduce_gens(&self, sub: &Subgroup) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut current = self.closure(&gens);
        for &e in &sub.elems {
            if current.order() == sub.order() {
                break;
            }
            if !current.contains(e) {
                gens.push(e);
                current = self.closure(&gens);
            }
        }
        debug_assert_eq!(current.order(), sub.order());
        gens
    }

    /// Elements of `amb` (or the whole group) commuting with every target.
    pub fn centralizer(&self, amb: Option<&Subgroup>, targets: &[u32]) -> Subgroup {
        let candidates: Vec<u32> = match amb {
            Some(a) => a.elems.clone(),
            None => (0..self.n as u32).collect(),
        };
        let kept: Vec<u32> = candidates
            .into_par_iter()
            .filter(|&g| targets.iter().all(|&t| self.mul(g, t) == self.mul(t, g)))
            .collect();
        let mut bits = Bitset::new(self.n);
        for &e in &kept {
            bits.insert(e);
        }
        let mut sub = Subgroup {
            elems: kept,
            bits,
            gens: Vec::new(),
        };
        sub.gens = self.reduce_gens(&sub);
        sub
    }

    /// Elements of `amb` (or the whole group) normalizing the subgroup T.
    pub fn normalizer(&self, amb: Option<&Subgroup>, t: &Subgroup) -> Subgroup {
        let candidates: Vec<u32> = match amb {
            Some(a) => a.elems.clone(),
            None => (0..self.n as u32).collect(),
        };
        let kept: Vec<u32> = candidates
            .into_par_iter()
            .filter(|&g| t.gens.iter().all(|&x| t.contains(self.conj(x, g))))
            .collect();
        let mut bits = Bitset::new(self.n);
        for &e in &kept {
            bits.insert(e);
        }
        let mut sub = Subgroup {
            elems: kept,
            bits,
            gens: Vec::new(),
        };
        sub.gens = self.reduce_gens(&sub);
        sub
    }

    /// Smallest subgroup containing the seeds and closed under conjugation
    /// by the given conjugators.
    pub fn normal_closure(&self, seeds: &[u32], conjugators: &[u32]) -> Subgroup {
        let mut gens: Vec<u32> = seeds.to_vec();
        loop {
            let sub = self.closure(&gens);
            // <X>^g = <X^g>, so invariance need only be checked on gens.
            let mut grew = false;
            for &x in &gens.clone() {
                for &g in conjugators {
                    let y = self.conj(x, g);
                    if !sub.contains(y) {
                        gens.push(y);
                        grew = true;
                    }
                }
            }
            if !grew {
                let gens = self.reduce_gens(&sub);
                return Subgroup { gens, ..sub };
            }
        }
    }

    /// The commutator subgroup [A, B] = normal closure in <A, B> of the
    /// generator commutators.
    pub fn derived(&self, a_gens: &[u32], b_gens: &[u32]) -> Subgroup {
        let mut seeds = Vec::new();
        for &a in a_gens {
            for &b in b_gens {
                let c = self.comm(a, b);
                if c != self.identity() {
                    seeds.push(c);
                }
            }
        }
        let mut conjugators: Vec<u32> = a_gens.to_vec();
        conjugators.extend_from_slice(b_gens);
        self.normal_closure(&seeds, &conjugators)
    }

    /// Frattini subgroup [P, P] P^p of a p-subgroup.
    pub fn frattini(&self, sub: &Subgroup) -> Subgroup {
        let p = self.fp.p();
        let derived = self.derived(&sub.gens, &sub.gens);
        let mut seeds = derived.gens.clone();
        let powers: Vec<u32> = sub
            .elems
            .par_iter()
            .map(|&g| self.pow(g, p))
            .collect();
        let mut seen = Bitset::new(self.n);
        for q in powers {
            if q != self.identity() && seen.insert(q) {
                seeds.push(q);
            }
        }
        let sub = self.closure(&seeds);
        let gens = self.reduce_gens(&sub);
        Subgroup { gens, ..sub }
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(None, &self.gens)
    }

    /// Upper central series 1 < Z_1 < Z_2 < ... up to the whole group.
    pub fn upper_central_series(&self) -> Vec<Subgroup> {
        let mut series: Vec<Subgroup> = Vec::new();
        let mut current = self.closure(&[]);
        loop {
            // Z_{i+1} = { g : [g, x] in Z_i for every generator x }.
            let kept: Vec<u32> = (0..self.n as u32)
                .into_par_iter()
                .filter(|&g| self.gens.iter().all(|&x| current.contains(self.comm(g, x))))
                .collect();
            let mut bits = Bitset::new(self.n);
            for &e in &kept {
                bits.insert(e);
            }
            let mut next = Subgroup {
                elems: kept,
                bits,
                gens: Vec::new(),
            };
            next.gens = self.reduce_gens(&next);
            let done = next.order() == self.n;
            let stalled = next.order() == current.order();
            current = next;
            if !stalled {
                series.push(current.clone());
            }
            if done || stalled {
                return series;
            }
        }
    }

    /// Lower central series G = g_1 > g_2 = [G,G] > ... down to the trivial
    /// subgroup; returned ascending (trivial omitted) to mirror the upper
    /// series term layout.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let mut descending: Vec<Subgroup> = vec![self.whole()];
        loop {
            let last = descending.last().expect("nonempty");
            let next = self.derived(&last.gens, &self.gens);
            if next.order() == 1 {
                break;
            }
            if next.order() == last.order() {
                break;
            }
            descending.push(next);
        }
        descending.reverse();
        descending
    }

    pub fn element_order(&self, x: u32) -> u32 {
        let mut acc = x;
        let mut k = 1;
        while acc != self.identity() {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self, sub: &Subgroup) -> u32 {
        sub.elems
            .par_iter()
            .map(|&x| self.element_order(x))
            .reduce(|| 1, num_lcm)
    }

    /// Map from element order to the number of carrier elements of that order.
    pub fn order_census(&self, sub: &Subgroup) -> BTreeMap<u32, u64> {
        let orders: Vec<u32> = sub
            .elems
            .par_iter()
            .map(|&x| self.element_order(x))
            .collect();
        let mut census = BTreeMap::new();
        for o in orders {
            *census.entry(o).or_insert(0) += 1;
        }
        census
    }

    pub fn is_abelian(&self, sub: &Subgroup) -> bool {
        sub.gens
            .iter()
            .all(|&a| sub.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_elementary_abelian(&self, sub: &Subgroup) -> bool {
        let p = self.fp.p();
        self.is_abelian(sub) && sub.elems.iter().all(|&x| self.pow(x, p) == self.identity())
    }

    /// Z(P) = [P,P] = Phi(P); extraspecial additionally requires order p.
    pub fn is_special(&self, sub: &Subgroup) -> bool {
        let center = self.centralizer(Some(sub), &sub.gens);
        let derived = self.derived(&sub.gens, &sub.gens);
        let frattini = self.frattini(sub);
        center.same_set(&derived) && derived.same_set(&frattini)
    }

    pub fn is_extraspecial(&self, sub: &Subgroup) -> bool {
        let center = self.centralizer(Some(sub), &sub.gens);
        center.order() == self.fp.p() as usize && self.is_special(sub)
    }

    /// The maximal (index-p) subgroups of a p-subgroup, as preimages of the
    /// hyperplanes in the elementary-abelian quotient P / Phi(P).
    pub fn maximal_subgroups_in(&self, sub: &Subgroup) -> Vec<Subgroup> {
        let p = self.fp.p();
        let phi = self.frattini(sub);
        // Burnside basis: greedily extend Phi(P) to all of P.
        let mut basis: Vec<u32> = Vec::new();
        let mut span = phi.clone();
        while span.order() < sub.order() {
            let g = sub
                .elems
                .iter()
                .copied()
                .find(|&g| !span.contains(g))
                .expect("span is proper");
            basis.push(g);
            let mut gens = span.gens.clone();
            gens.push(g);
            span = self.closure(&gens);
        }
        let rank = basis.len();
        assert_eq!(
            phi.order() * (p as usize).pow(rank as u32),
            sub.order(),
            "quotient by the Frattini subgroup is elementary abelian"
        );
        // One subgroup per normalized functional (first nonzero entry 1);
        // generators are the products over a basis of the kernel.
        let mut out = Vec::new();
        let mut functional = vec![0u32; rank];
        loop {
            // Advance to the next normalized functional.
            let mut i = rank;
            while i > 0 {
                functional[i - 1] += 1;
                if functional[i - 1] < p {
                    break;
                }
                functional[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
            if functional.iter().find(|&&c| c != 0) != Some(&1) {
                continue;
            }
            let pivot = functional.iter().position(|&c| c != 0).unwrap();
            let mut gens = phi.gens.clone();
            for j in 0..rank {
                if j == pivot {
                    continue;
                }
                // Kernel vector e_j - functional[j] e_pivot.
                let e = self.mul(
                    basis[j],
                    self.pow(basis[pivot], self.fp.neg(functional[j])),
                );
                gens.push(e);
            }
            out.push(self.closure(&gens));
        }
        for m in &out {
            assert_eq!(m.order() * p as usize, sub.order());
        }
        out
    }

    pub fn maximal_subgroups(&self) -> Vec<Subgroup> {
        self.maximal_subgroups_in(&self.whole())
    }

    pub fn conjugacy_classes(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let mut class_of = vec![u32::MAX; self.n];
            let mut members: Vec<Vec<u32>> = Vec::new();
            for start in 0..self.n as u32 {
                if class_of[start as usize] != u32::MAX {
                    continue;
                }
                let cid = members.len() as u32;
                let mut orbit = vec![start];
                class_of[start as usize] = cid;
                let mut queue = VecDeque::from([start]);
                while let Some(x) = queue.pop_front() {
                    for &g in &self.gens {
                        let y = self.conj(x, g);
                        if class_of[y as usize] == u32::MAX {
                            class_of[y as usize] = cid;
                            orbit.push(y);
                            queue.push_back(y);
                        }
                    }
                }
                orbit.sort_unstable();
                members.push(orbit);
            }
            Classes { class_of, members }
        })
    }

    /// All non-trivial normal subgroups of order at most `max_order`, by
    /// depth-first closure over unions of conjugacy classes.
    pub fn bounded_normal_subgroups(&self, max_order: usize) -> Vec<Subgroup> {
        let classes = self.conjugacy_classes();
        // Candidate classes, ordered by smallest member id.
        let class_ids: Vec<u32> = (0..classes.members.len() as u32)
            .filter(|&c| classes.members[c as usize] != [self.identity()])
            .filter(|&c| classes.members[c as usize].len() <= max_order)
            .collect();
        let mut found: BTreeMap<u64, Subgroup> = BTreeMap::new();
        let mut stack: Vec<(Subgroup, usize)> = vec![(self.closure(&[]), 0)];
        while let Some((base, next)) = stack.pop() {
            for (i, &c) in class_ids.iter().enumerate().skip(next) {
                let rep = classes.members[c as usize][0];
                if base.contains(rep) {
                    continue;
                }
                let mut seeds = base.gens.clone();
                seeds.extend_from_slice(&classes.members[c as usize]);
                // Class-closed generating sets give normal subgroups, so
                // plain closure suffices here.
                let cand = self.closure(&seeds);
                if cand.order() > max_order {
                    continue;
                }
                let cand = Subgroup {
                    gens: self.reduce_gens(&cand),
                    ..cand
                };
                let key = cand.key();
                if !found.contains_key(&key) {
                    found.insert(key, cand.clone());
                    stack.push((cand, i + 1));
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_values().collect();
        out.sort_by_key(|s| (s.order(), s.elems.clone()));
        out
    }

    /// Extends a generator-image map to the whole carrier via normal forms.
    pub fn extend_map(&self, images: &[u32; 6], target: &GroupTable) -> Vec<u32> {
        (0..self.n as u32)
            .into_par_iter()
            .map(|id| {
                let params = self.factor(id);
                let mut acc = target.identity();
                for (i, &l) in params.iter().enumerate() {
                    acc = target.mul(acc, target.pow(images[i], l));
                }
                acc
            })
            .collect()
    }

    /// Generator-pair homomorphism test: with f the word-extension of the
    /// images, checks f(g x) = f(g) f(x) for every generator g and all x.
    pub fn hom_check(&self, images: &[u32; 6], target: &GroupTable) -> HomCheck {
        let f = self.extend_map(images, target);
        let witness = (0..self.n as u32).into_par_iter().find_map_any(|x| {
            for (gi, &g) in self.gens.iter().enumerate() {
                let lhs = f[self.mul(g, x) as usize];
                let rhs = target.mul(f[g as usize], f[x as usize]);
                if lhs != rhs {
                    return Some((gi as u32, x));
                }
            }
            None
        });
        let mut image = Bitset::new(target.n);
        for &y in &f {
            image.insert(y);
        }
        HomCheck {
            ok: witness.is_none(),
            image_size: image.count(),
            witness,
            map: f,
        }
    }
}

/// A small fully tabulated group, used for quotients of modest order.
pub struct DenseGroup {
    pub n: usize,
    mul: Vec<u32>,
}

impl GroupTable {
    /// The quotient sub / normal as a dense Cayley table; `normal` must be
    /// normal in `sub` (checked by coset well-definedness in debug builds).
    pub fn quotient(&self, sub: &Subgroup, normal: &Subgroup) -> DenseGroup {
        let mut coset_of: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        let mut reps: Vec<u32> = Vec::new();
        for &e in &sub.elems {
            if coset_of.contains_key(&e) {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(e);
            for &z in &normal.elems {
                let prev = coset_of.insert(self.mul(z, e), idx);
                debug_assert!(prev.is_none());
            }
        }
        let n = reps.len();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = coset_of[&self.mul(reps[i], reps[j])];
            }
        }
        DenseGroup { n, mul }
    }
}

impl DenseGroup {
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    pub fn element_order(&self, x: u32) -> u32 {
        let mut acc = x;
        let mut k = 1;
        while acc != 0 {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u32 {
        (0..self.n as u32)
            .map(|x| self.element_order(x))
            .fold(1, num_lcm)
    }

    pub fn center(&self) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&x| (0..self.n as u32).all(|y| self.mul(x, y) == self.mul(y, x)))
            .collect()
    }

    fn close(&self, seeds: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut elems = vec![0u32];
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &s in seeds {
            if !seen[s as usize] {
                seen[s as usize] = true;
                elems.push(s);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &g in seeds {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    pub fn inv(&self, x: u32) -> u32 {
        (0..self.n as u32)
            .find(|&y| self.mul(x, y) == 0)
            .expect("inverse exists")
    }

    pub fn derived(&self) -> Vec<u32> {
        let comms: Vec<u32> = (0..self.n as u32)
            .flat_map(|a| {
                (0..self.n as u32)
                    .map(move |b| (a, b))
            })
            .map(|(a, b)| {
                self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
            })
            .filter(|&c| c != 0)
            .collect();
        self.close(&comms)
    }

    pub fn frattini(&self, p: u32) -> Vec<u32> {
        let mut seeds = self.derived();
        seeds.extend((0..self.n as u32).map(|x| {
            let mut acc = 0;
            for _ in 0..p {
                acc = self.mul(acc, x);
            }
            acc
        }));
        self.close(&seeds)
    }

    /// Extraspecial of order p^(1+2k): Z = [G,G] = Phi(G) of order p.
    pub fn is_extraspecial(&self, p: u32) -> bool {
        let center = self.center();
        center.len() == p as usize
            && center == self.derived()
            && center == self.frattini(p)
    }
}

/// Outcome of a generator-pair homomorphism test.
pub struct HomCheck {
    pub ok: bool,
    pub image_size: usize,
    /// First failing (generator index, element id) pair, if any.
    pub witness: Option<(u32, u32)>,
    /// The extended map, kept for permutation-level consumers.
    pub map: Vec<u32>,
}

pub fn num_lcm(a: u32, b: u32) -> u32 {
    let gcd = {
        let (mut x, mut y) = (a, b);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / gcd * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_table(p: u32) -> GroupTable {
        GroupTable::build(Fp::new(p).unwrap(), Model::Poly).unwrap()
    }

    #[test]
    fn closure_examples_p5() {
        let t = poly_table(5);
        assert_eq!(t.closure(&[]).order(), 1);
        // <x_6> has order p.
        assert_eq!(t.closure(&[t.gens[5]]).order(), 5);
        // Q = <x_2, .., x_6> has order p^5.
        let q = t.closure(&t.gens[1..6]);
        assert_eq!(q.order(), 3125);
        assert!(t.is_extraspecial(&q));
        assert_eq!(t.exponent(&q), 5);
    }

    #[test]
    fn carrier_closure_is_p6() {
        let t = poly_table(5);
        t.certify_carrier().unwrap();
        let c3 = GroupTable::build(Fp::new(3).unwrap(), Model::Chevalley).unwrap();
        c3.certify_carrier().unwrap();
        assert_eq!(c3.n, 729);
    }

    #[test]
    fn central_series_p5() {
        let t = poly_table(5);
        let upper = t.upper_central_series();
        let orders: Vec<usize> = upper.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![5, 25, 125, 625, 15_625]);
        let lower = t.lower_central_series();
        assert_eq!(lower.len(), upper.len());
        for (u, l) in upper.iter().zip(&lower) {
            assert!(u.same_set(l));
        }
    }

    #[test]
    fn derived_and_frattini_p5() {
        let t = poly_table(5);
        let whole = t.whole();
        let ds = t.derived(&whole.gens, &whole.gens);
        assert_eq!(ds.order(), 625);
        let phi = t.frattini(&whole);
        assert!(phi.same_set(&ds));
        let q = t.closure(&t.gens[1..6]);
        let dq = t.derived(&q.gens, &q.gens);
        assert_eq!(dq.order(), 5);
    }

    #[test]
    fn centralizer_and_normalizer_p5() {
        let t = poly_table(5);
        let center = t.center();
        assert_eq!(center.order(), 5);
        let upper = t.upper_central_series();
        let z2 = &upper[1];
        let r = t.centralizer(None, &z2.gens);
        assert_eq!(r.order(), 3125);
        // R is its own normalizer's subgroup: maximal, so normalizer is S.
        let nr = t.normalizer(None, &r);
        assert_eq!(nr.order(), t.n);
    }

    #[test]
    fn maximal_subgroups_p5() {
        let t = poly_table(5);
        let maximals = t.maximal_subgroups();
        assert_eq!(maximals.len(), 6);
        let phi = t.frattini(&t.whole());
        for m in &maximals {
            assert!(phi.is_subset_of(m));
        }
    }

    #[test]
    fn bounded_normal_subgroups_p5() {
        let t = poly_table(5);
        let normals = t.bounded_normal_subgroups(625);
        let upper = t.upper_central_series();
        assert_eq!(normals.len(), 4);
        for (n, z) in normals.iter().zip(&upper) {
            assert!(n.same_set(z));
        }
    }

    #[test]
    fn hom_check_identity_and_corrupted() {
        let t = poly_table(5);
        let id_images = t.gens;
        let ok = t.hom_check(&id_images, &t);
        assert!(ok.ok);
        assert_eq!(ok.image_size, t.n);
        // Corrupting x_6 breaks the central commutator relations.
        let mut bad = t.gens;
        bad[5] = t.pow(t.gens[5], 2);
        let res = t.hom_check(&bad, &t);
        assert!(!res.ok);
        assert!(res.witness.is_some());
    }

    #[test]
    fn element_orders_p5() {
        let t = poly_table(5);
        assert_eq!(t.element_order(t.identity()), 1);
        assert_eq!(t.element_order(t.gens[0]), 5);
        assert_eq!(t.exponent(&t.whole()), 25);
    }

    #[test]
    fn chevalley_dense_table_matches_matrices() {
        let t = GroupTable::build(Fp::new(3).unwrap(), Model::Chevalley).unwrap();
        let fp = t.fp();
        for a in (0..t.n as u32).step_by(17) {
            for b in (0..t.n as u32).step_by(23) {
                let m = eval_word(fp, &decode_word(3, a)).mul(&eval_word(fp, &decode_word(3, b)), fp);
                let expect = encode_word(3, &normal_form(fp, &m).unwrap());
                assert_eq!(t.mul(a, b), expect);
            }
        }
    }
}
