//! The polynomial model of the Sylow p-subgroup for p >= 5.
//!
//! V is the 4-space of cubic forms in X, Y with basis (X^3, X^2Y, XY^2, Y^3).
//! Q = (V x F, *) carries the central-extension law twisted by the bilinear
//! form beta; L = F^x x GL_2 acts on Q; S = S_0 Q is generated by x_1 .. x_6.
//! Elements of S live in the normal form (a, v, z) = x_1(a) * (v, z), which
//! makes the carrier a bijective p^6 coordinate cube.

use crate::field::{FieldError, Fp};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("matrix is singular mod {0}")]
    Singular(u32),
}

/// Coefficients (c30, c21, c12, c03) of X^3, X^2Y, XY^2, Y^3.
pub type CubicVector = [u32; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QElement {
    pub v: CubicVector,
    pub z: u32,
}

/// An element (t, A) of L = F^x x GL_2, A row-major [[a00, a01], [a10, a11]].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LElement {
    pub t: u32,
    pub a: [u32; 4],
}

/// Lower-triangular L-element (a01 = 0), the B_0 part of B = B_0 Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BElement {
    pub t: u32,
    /// (a00, a10, a11) of the lower-triangular matrix.
    pub a: [u32; 3],
}

impl BElement {
    pub fn to_l(self) -> LElement {
        LElement {
            t: self.t,
            a: [self.a[0], 0, self.a[1], self.a[2]],
        }
    }
}

/// Normal form x_1(a) * (v, z) of an element of S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SElement {
    pub a: u32,
    pub v: CubicVector,
    pub z: u32,
}

pub const S_IDENTITY: SElement = SElement {
    a: 0,
    v: [0, 0, 0, 0],
    z: 0,
};

/// The model context: field, beta Gram matrix, and the cached substitution
/// matrices of the x_1(c) action on V (one 4x4 matrix per c in [0, p)).
pub struct PolyModel {
    fp: Fp,
    beta_gram: [[u32; 4]; 4],
    x1_sub: Vec<[[u32; 4]; 4]>,
    inv2: u32,
    inv3: u32,
}

impl PolyModel {
    pub fn new(fp: Fp) -> Result<Self, PolyError> {
        let p = fp.p();
        if p == 3 {
            return Err(PolyError::Field(FieldError::RequiresP5));
        }
        // beta(X^aY^b, X^cY^d) = 0 if a != d, else (-1)^a / C(3, a).
        // Basis index i has X-degree 3-i; index j has Y-degree j.
        let mut beta_gram = [[0u32; 4]; 4];
        for (i, row) in beta_gram.iter_mut().enumerate() {
            let a = 3 - i as u32;
            let sign = if a % 2 == 0 { 1 } else { fp.neg(1) };
            row[a as usize] = fp.mul(sign, fp.inv(fp.binom3(a)?)?);
        }
        let mut model = Self {
            fp,
            beta_gram,
            x1_sub: Vec::new(),
            inv2: fp.inv(2)?,
            inv3: fp.inv(3)?,
        };
        model.x1_sub = (0..p)
            .map(|c| {
                model.substitution_matrix(&LElement {
                    t: 1,
                    a: [1, 0, c, 1],
                })
            })
            .collect();
        Ok(model)
    }

    #[inline]
    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn beta_form(&self, v: &CubicVector, w: &CubicVector) -> u32 {
        let fp = self.fp;
        let mut acc = 0;
        for i in 0..4 {
            if v[i] == 0 {
                continue;
            }
            for j in 0..4 {
                acc = fp.add(acc, fp.mul(fp.mul(v[i], w[j]), self.beta_gram[i][j]));
            }
        }
        acc
    }

    /// The Gram matrix of beta in the basis (X^3, X^2Y, XY^2, Y^3).
    pub fn beta_gram(&self) -> [[u32; 4]; 4] {
        self.beta_gram
    }

    pub fn q_multiply(&self, q1: &QElement, q2: &QElement) -> QElement {
        let fp = self.fp;
        let mut v = [0u32; 4];
        for i in 0..4 {
            v[i] = fp.add(q1.v[i], q2.v[i]);
        }
        QElement {
            v,
            z: fp.add(fp.add(q1.z, q2.z), self.beta_form(&q1.v, &q2.v)),
        }
    }

    pub fn q_inverse(&self, q: &QElement) -> QElement {
        let fp = self.fp;
        QElement {
            v: q.v.map(|c| fp.neg(c)),
            z: fp.neg(q.z),
        }
    }

    /// The 4x4 matrix (columns = images of basis monomials) of the linear
    /// substitution X^aY^b -> t (a00 X + a01 Y)^a (a10 X + a11 Y)^b.
    fn substitution_matrix(&self, g: &LElement) -> [[u32; 4]; 4] {
        let fp = self.fp;
        let [a00, a01, a10, a11] = g.a;
        let binom = |n: u32, k: u32| match (n, k) {
            (_, 0) => 1,
            (1, 1) => 1,
            (2, 1) => 2 % fp.p(),
            (2, 2) => 1,
            (3, 1) | (3, 2) => 3 % fp.p(),
            (3, 3) => 1,
            _ => unreachable!(),
        };
        let mut m = [[0u32; 4]; 4];
        for (j, col) in (0..4).map(|j| (j as u32, j)) {
            let a = 3 - j;
            let b = j;
            // (a00 X + a01 Y)^a (a10 X + a11 Y)^b expanded termwise.
            for r in 0..=a {
                for s in 0..=b {
                    let coef = fp.mul(
                        fp.mul(
                            fp.mul(binom(a, r), fp.mul(fp.pow(a00, r), fp.pow(a01, a - r))),
                            fp.mul(binom(b, s), fp.mul(fp.pow(a10, s), fp.pow(a11, b - s))),
                        ),
                        g.t,
                    );
                    let xdeg = (r + s) as usize;
                    m[3 - xdeg][col] = fp.add(m[3 - xdeg][col], coef);
                }
            }
        }
        m
    }

    pub fn l_act_vector(&self, v: &CubicVector, g: &LElement) -> CubicVector {
        self.apply_sub(&self.substitution_matrix(g), v)
    }

    #[inline]
    fn apply_sub(&self, m: &[[u32; 4]; 4], v: &CubicVector) -> CubicVector {
        let fp = self.fp;
        let mut out = [0u32; 4];
        for (i, row) in m.iter().enumerate() {
            let mut acc = 0;
            for j in 0..4 {
                acc = fp.add(acc, fp.mul(row[j], v[j]));
            }
            out[i] = acc;
        }
        out
    }

    fn det(&self, g: &LElement) -> u32 {
        let fp = self.fp;
        fp.sub(fp.mul(g.a[0], g.a[3]), fp.mul(g.a[1], g.a[2]))
    }

    /// (v, z) ^ (t, A) = (v . (t, A), t^2 (det A)^3 z).
    pub fn q_act(&self, q: &QElement, g: &LElement) -> Result<QElement, PolyError> {
        let fp = self.fp;
        let det = self.det(g);
        if det == 0 || g.t % fp.p() == 0 {
            return Err(PolyError::Singular(fp.p()));
        }
        let zfac = fp.mul(fp.pow(g.t, 2), fp.pow(det, 3));
        Ok(QElement {
            v: self.l_act_vector(&q.v, g),
            z: fp.mul(zfac, q.z),
        })
    }

    /// Exhaustively computed kernel of the L-action on Q.
    pub fn action_kernel(&self) -> Vec<LElement> {
        let fp = self.fp;
        let p = fp.p();
        let mut kernel = Vec::new();
        let basis: [QElement; 5] = [
            QElement { v: [1, 0, 0, 0], z: 0 },
            QElement { v: [0, 1, 0, 0], z: 0 },
            QElement { v: [0, 0, 1, 0], z: 0 },
            QElement { v: [0, 0, 0, 1], z: 0 },
            QElement { v: [0, 0, 0, 0], z: 1 },
        ];
        for t in 1..p {
            for code in 0..p * p * p * p {
                let a = [
                    code % p,
                    code / p % p,
                    code / (p * p) % p,
                    code / (p * p * p),
                ];
                let g = LElement { t, a };
                if self.det(&g) == 0 {
                    continue;
                }
                if basis
                    .iter()
                    .all(|q| self.q_act(q, &g).expect("invertible") == *q)
                {
                    kernel.push(g);
                }
            }
        }
        kernel
    }

    /// (a, v, z) * (a', v', z') = (a + a', (v, z)^{x_1(a')} * (v', z')).
    pub fn s_multiply(&self, s1: &SElement, s2: &SElement) -> SElement {
        let fp = self.fp;
        let moved = self.apply_sub(&self.x1_sub[s2.a as usize], &s1.v);
        let mut v = [0u32; 4];
        for i in 0..4 {
            v[i] = fp.add(moved[i], s2.v[i]);
        }
        SElement {
            a: fp.add(s1.a, s2.a),
            v,
            z: fp.add(fp.add(s1.z, s2.z), self.beta_form(&moved, &s2.v)),
        }
    }

    pub fn s_inverse(&self, s: &SElement) -> SElement {
        let fp = self.fp;
        let na = fp.neg(s.a);
        let moved = self.apply_sub(&self.x1_sub[na as usize], &s.v);
        SElement {
            a: na,
            v: moved.map(|c| fp.neg(c)),
            z: fp.neg(s.z),
        }
    }

    /// The standard generator x_i(lambda), i in 1..=6.
    pub fn generator(&self, i: usize, lambda: i64) -> SElement {
        let fp = self.fp;
        let l = fp.reduce(lambda);
        match i {
            1 => SElement { a: l, v: [0, 0, 0, 0], z: 0 },
            2 => SElement { a: 0, v: [0, 0, 0, l], z: 0 },
            3 => SElement { a: 0, v: [0, 0, fp.reduce(-3 * lambda), 0], z: 0 },
            4 => SElement { a: 0, v: [0, fp.reduce(3 * lambda), 0, 0], z: 0 },
            5 => SElement { a: 0, v: [fp.neg(l), 0, 0, 0], z: 0 },
            6 => SElement { a: 0, v: [0, 0, 0, 0], z: fp.reduce(-2 * lambda) },
            _ => panic!("generator index out of range: {i}"),
        }
    }

    /// Images of x_1(1) .. x_6(1) under conjugation by d in B.
    ///
    /// The S_0 part transforms by 2x2 matrix conjugation
    /// (x_1(a)^d = x_1(a * a00 / a11)); the Q part by q_act.
    pub fn b_conjugation(&self, d: &BElement) -> Result<[SElement; 6], PolyError> {
        let fp = self.fp;
        let l = d.to_l();
        if self.det(&l) == 0 || d.t % fp.p() == 0 {
            return Err(PolyError::Singular(fp.p()));
        }
        let ratio = fp.div(d.a[0], d.a[2])?;
        let mut images = [S_IDENTITY; 6];
        images[0] = SElement {
            a: ratio,
            v: [0, 0, 0, 0],
            z: 0,
        };
        for i in 2..=6 {
            let g = self.generator(i, 1);
            let q = self.q_act(&QElement { v: g.v, z: g.z }, &l)?;
            images[i - 1] = SElement {
                a: 0,
                v: q.v,
                z: q.z,
            };
        }
        Ok(images)
    }

    /// Bijective encoding of the normal form into [0, p^6).
    #[inline]
    pub fn encode(&self, s: &SElement) -> u32 {
        let p = self.fp.p();
        let mut id = s.a;
        for c in s.v {
            id = id * p + c;
        }
        id * p + s.z
    }

    #[inline]
    pub fn decode(&self, id: u32) -> SElement {
        let p = self.fp.p();
        let mut rest = id;
        let z = rest % p;
        rest /= p;
        let mut v = [0u32; 4];
        for i in (0..4).rev() {
            v[i] = rest % p;
            rest /= p;
        }
        SElement { a: rest, v, z }
    }

    /// Parameters (p_1, .., p_6) with s = x_1(p_1) x_2(p_2) ... x_6(p_6),
    /// found by left-peeling one generator at a time.
    pub fn factor(&self, s: &SElement) -> [u32; 6] {
        let fp = self.fp;
        let mut rest = *s;
        let mut params = [0u32; 6];
        for (slot, i) in (1..=6usize).enumerate() {
            let lambda = match i {
                1 => rest.a,
                2 => rest.v[3],
                3 => fp.neg(fp.mul(rest.v[2], self.inv3)),
                4 => fp.mul(rest.v[1], self.inv3),
                5 => fp.neg(rest.v[0]),
                6 => fp.neg(fp.mul(rest.z, self.inv2)),
                _ => unreachable!(),
            };
            params[slot] = lambda;
            let inv = self.s_inverse(&self.generator(i, lambda as i64));
            rest = self.s_multiply(&inv, &rest);
        }
        debug_assert_eq!(rest, S_IDENTITY);
        params
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(p: u32) -> PolyModel {
        PolyModel::new(Fp::new(p).unwrap()).unwrap()
    }

    #[test]
    fn rejects_p3() {
        assert!(PolyModel::new(Fp::new(3).unwrap()).is_err());
    }

    #[test]
    fn beta_known_values() {
        let m = model(7);
        assert_eq!(m.beta_form(&[1, 0, 0, 0], &[0, 1, 0, 0]), 0);
        // beta(X^3, Y^3) = (-1)^3 / C(3,3) = -1.
        assert_eq!(m.beta_form(&[1, 0, 0, 0], &[0, 0, 0, 1]), 6);
        // beta(X^2Y, XY^2) = 1/3.
        let fp = m.fp();
        assert_eq!(
            m.beta_form(&[0, 1, 0, 0], &[0, 0, 1, 0]),
            fp.inv(3).unwrap()
        );
    }

    #[test]
    fn beta_alternating_exhaustive_p5() {
        let m = model(5);
        for code in 0..625u32 {
            let v = [code % 5, code / 5 % 5, code / 25 % 5, code / 125];
            assert_eq!(m.beta_form(&v, &v), 0, "v={v:?}");
        }
    }

    #[test]
    fn q_commutator_formula_exhaustive_p5() {
        // [(v,y),(w,z)] = (0, 2 beta(v,w)) for all pairs of Q at p = 5.
        let m = model(5);
        let fp = m.fp();
        let all: Vec<QElement> = (0..3125u32)
            .map(|c| QElement {
                v: [c % 5, c / 5 % 5, c / 25 % 5, c / 125 % 5],
                z: c / 625,
            })
            .collect();
        for q1 in all.iter().step_by(7) {
            for q2 in all.iter().step_by(5) {
                let lhs = m.q_multiply(
                    &m.q_multiply(&m.q_inverse(q1), &m.q_inverse(q2)),
                    &m.q_multiply(q1, q2),
                );
                let expected = QElement {
                    v: [0; 4],
                    z: fp.mul(2, m.beta_form(&q1.v, &q2.v)),
                };
                assert_eq!(lhs, expected);
            }
        }
    }

    #[test]
    fn l_action_examples() {
        let m = model(7);
        let fp = m.fp();
        // Y^3 . (1, [[1,0],[mu,1]]) = mu^3 X^3 + 3 mu^2 X^2 Y + 3 mu XY^2 + Y^3.
        let mu = 3;
        let g = LElement { t: 1, a: [1, 0, mu, 1] };
        let got = m.l_act_vector(&[0, 0, 0, 1], &g);
        assert_eq!(
            got,
            [
                fp.pow(mu, 3),
                fp.mul(3, fp.pow(mu, 2)),
                fp.mul(3, mu),
                1
            ]
        );
        // X^3 . (t, diag(l, 1)) = t l^3 X^3.
        let g = LElement { t: 4, a: [2, 0, 0, 1] };
        assert_eq!(
            m.l_act_vector(&[1, 0, 0, 0], &g),
            [fp.mul(4, fp.pow(2, 3)), 0, 0, 0]
        );
    }

    #[test]
    fn q_act_is_automorphism_sampled() {
        let m = model(5);
        let gs = [
            LElement { t: 2, a: [1, 3, 0, 4] },
            LElement { t: 1, a: [0, 1, 4, 2] },
            LElement { t: 4, a: [3, 1, 1, 3] },
        ];
        let all: Vec<QElement> = (0..3125u32)
            .map(|c| QElement {
                v: [c % 5, c / 5 % 5, c / 25 % 5, c / 125 % 5],
                z: c / 625,
            })
            .collect();
        for g in &gs {
            for q1 in all.iter().step_by(11) {
                for q2 in all.iter().step_by(13) {
                    let lhs = m.q_act(&m.q_multiply(q1, q2), g).unwrap();
                    let rhs = m.q_multiply(
                        &m.q_act(q1, g).unwrap(),
                        &m.q_act(q2, g).unwrap(),
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn kernel_matches_formula() {
        for p in [5, 7] {
            let m = model(p);
            let fp = m.fp();
            let kernel = m.action_kernel();
            assert_eq!(kernel.len(), (p - 1) as usize);
            for mu in 1..p {
                let expected = LElement {
                    t: fp.inv(fp.pow(mu, 3)).unwrap(),
                    a: [mu, 0, 0, mu],
                };
                assert!(kernel.contains(&expected), "mu={mu} p={p}");
            }
        }
    }

    #[test]
    fn s_group_axioms_sampled() {
        let m = model(7);
        let el = |seed: u32| m.decode(seed % 117_649);
        for k in 0..200u32 {
            let (a, b, c) = (
                el(k.wrapping_mul(2_654_435_761)),
                el(k.wrapping_mul(40_503) + 17),
                el(k.wrapping_mul(99_991) + 5),
            );
            let ab_c = m.s_multiply(&m.s_multiply(&a, &b), &c);
            let a_bc = m.s_multiply(&a, &m.s_multiply(&b, &c));
            assert_eq!(ab_c, a_bc);
            assert_eq!(m.s_multiply(&a, &m.s_inverse(&a)), S_IDENTITY);
            assert_eq!(m.s_multiply(&S_IDENTITY, &a), a);
        }
    }

    #[test]
    fn generator_coordinates() {
        let m = model(7);
        assert_eq!(m.generator(4, 1).v, [0, 3, 0, 0]);
        assert_eq!(m.generator(2, 0), S_IDENTITY);
        // x_1(a) x_1(b) = x_1(a+b).
        assert_eq!(
            m.s_multiply(&m.generator(1, 4), &m.generator(1, 5)),
            m.generator(1, 2)
        );
    }

    #[test]
    fn encode_decode_roundtrip() {
        let m = model(5);
        for id in 0..15_625u32 {
            assert_eq!(m.encode(&m.decode(id)), id);
        }
    }

    #[test]
    fn factor_reassembles() {
        let m = model(5);
        for id in (0..15_625u32).step_by(7) {
            let s = m.decode(id);
            let params = m.factor(&s);
            let mut acc = S_IDENTITY;
            for (i, &l) in params.iter().enumerate() {
                acc = m.s_multiply(&acc, &m.generator(i + 1, l as i64));
            }
            assert_eq!(acc, s);
        }
    }

    #[test]
    fn b_conjugation_x6_scaling() {
        let m = model(7);
        let fp = m.fp();
        // d = (t, diag(l, 1)) sends x_6(c) to x_6(t^2 l^3 c).
        let (t, l) = (3, 2);
        let d = BElement { t, a: [l, 0, 1] };
        let images = m.b_conjugation(&d).unwrap();
        let scale = fp.mul(fp.pow(t, 2), fp.pow(l, 3));
        assert_eq!(images[5], m.generator(6, scale as i64));
    }
}
