//! Exact arithmetic in the prime field F_p for odd primes 3 <= p <= 31.
//!
//! Two layers: [`Fp`] is a lightweight modulus context with unchecked-speed
//! operations on raw residues, used by the hot group-law code; [`Scalar`]
//! carries its modulus and refuses to mix residues from different fields.

use thiserror::Error;

/// Smallest supported prime.
pub const MIN_P: u32 = 3;
/// Largest supported prime; carriers are p^6 so this caps memory explicitly.
pub const MAX_P: u32 = 31;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("unsupported modulus {0}: need an odd prime in [{MIN_P}, {MAX_P}]")]
    UnsupportedPrime(u32),
    #[error("model requires p >= 5 (3 is not invertible mod 3)")]
    RequiresP5,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Modulus context: all methods take and return reduced residues in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p < MIN_P || p > MAX_P || p % 2 == 0 || !is_prime(p) {
            return Err(FieldError::UnsupportedPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into [0, p).
    #[inline]
    pub fn reduce(self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.p - b % self.p)
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    pub fn pow(self, a: u32, mut e: u32) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32, FieldError> {
        if a % self.p == 0 {
            return Err(FieldError::DivisionByZero(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// C(3, a) as a residue. Needs p >= 5 when a is 1 or 2.
    pub fn binom3(self, a: u32) -> Result<u32, FieldError> {
        let c = match a {
            0 | 3 => 1,
            1 | 2 => {
                if self.p == 3 {
                    return Err(FieldError::RequiresP5);
                }
                3
            }
            _ => panic!("binom3 argument out of range: {a}"),
        };
        Ok(c % self.p)
    }
}

/// Inverse of an n x n matrix (row-major) over F_p, or None if singular.
pub fn gauss_inverse(fp: Fp, n: usize, a: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut inv = vec![0u32; n * n];
    for i in 0..n {
        inv[i * n + i] = 1;
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r * n + col] != 0)?;
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let scale = fp.inv(m[col * n + col]).ok()?;
        for j in 0..n {
            m[col * n + j] = fp.mul(m[col * n + j], scale);
            inv[col * n + j] = fp.mul(inv[col * n + j], scale);
        }
        for r in 0..n {
            if r == col || m[r * n + col] == 0 {
                continue;
            }
            let f = m[r * n + col];
            for j in 0..n {
                m[r * n + j] = fp.sub(m[r * n + j], fp.mul(f, m[col * n + j]));
                inv[r * n + j] = fp.sub(inv[r * n + j], fp.mul(f, inv[col * n + j]));
            }
        }
    }
    Some(inv)
}

/// Rank of an r x c matrix (row-major) over F_p.
pub fn gauss_rank(fp: Fp, rows: usize, cols: usize, a: &[u32]) -> usize {
    assert_eq!(a.len(), rows * cols);
    let mut m = a.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r * cols + col] != 0) else {
            continue;
        };
        for j in 0..cols {
            m.swap(rank * cols + j, pivot * cols + j);
        }
        let scale = fp.inv(m[rank * cols + col]).expect("nonzero pivot");
        for j in 0..cols {
            m[rank * cols + j] = fp.mul(m[rank * cols + j], scale);
        }
        for r in 0..rows {
            if r == rank || m[r * cols + col] == 0 {
                continue;
            }
            let f = m[r * cols + col];
            for j in 0..cols {
                m[r * cols + j] = fp.sub(m[r * cols + j], fp.mul(f, m[rank * cols + j]));
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Determinant of an n x n matrix (row-major) over F_p.
pub fn gauss_det(fp: Fp, n: usize, a: &[u32]) -> u32 {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut det = 1u32;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
            }
            det = fp.neg(det);
        }
        det = fp.mul(det, m[col * n + col]);
        let scale = fp.inv(m[col * n + col]).expect("nonzero pivot");
        for r in col + 1..n {
            if m[r * n + col] == 0 {
                continue;
            }
            let f = fp.mul(m[r * n + col], scale);
            for j in col..n {
                m[r * n + j] = fp.sub(m[r * n + j], fp.mul(f, m[col * n + j]));
            }
        }
    }
    det
}

/// A residue tagged with its modulus; cross-modulus operations error out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub value: u32,
    pub p: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Inv,
}

impl Scalar {
    pub fn new(value: i64, fp: Fp) -> Self {
        Self {
            value: fp.reduce(value),
            p: fp.p(),
        }
    }

    fn fp(self) -> Fp {
        Fp { p: self.p }
    }

    fn same_field(self, other: Scalar) -> Result<Fp, FieldError> {
        if self.p != other.p {
            return Err(FieldError::ModulusMismatch(self.p, other.p));
        }
        Ok(self.fp())
    }
}

/// Dispatched binary/unary arithmetic; `Neg` and `Inv` ignore `b`.
pub fn field_arith(a: Scalar, b: Scalar, op: ArithOp) -> Result<Scalar, FieldError> {
    let fp = a.same_field(b)?;
    let value = match op {
        ArithOp::Add => fp.add(a.value, b.value),
        ArithOp::Sub => fp.sub(a.value, b.value),
        ArithOp::Mul => fp.mul(a.value, b.value),
        ArithOp::Div => fp.div(a.value, b.value)?,
        ArithOp::Pow => fp.pow(a.value, b.value),
        ArithOp::Neg => fp.neg(a.value),
        ArithOp::Inv => fp.inv(a.value)?,
    };
    Ok(Scalar { value, p: a.p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 33, 37] {
            assert!(Fp::new(p).is_err(), "p={p}");
        }
        for p in [3, 5, 7, 11, 13, 31] {
            assert!(Fp::new(p).is_ok(), "p={p}");
        }
    }

    #[test]
    fn inverses_exhaustive() {
        for p in [3, 5, 7, 11] {
            let fp = Fp::new(p).unwrap();
            for a in 1..p {
                let inv = fp.inv(a).unwrap();
                assert_eq!(fp.mul(a, inv), 1);
                assert_eq!(fp.pow(a, p - 1), 1);
            }
            assert_eq!(fp.inv(0), Err(FieldError::DivisionByZero(p)));
        }
    }

    #[test]
    fn known_values() {
        let f7 = Fp::new(7).unwrap();
        assert_eq!(f7.inv(1).unwrap(), 1);
        assert_eq!(f7.inv(3).unwrap(), 5);
        let f5 = Fp::new(5).unwrap();
        assert_eq!(f5.pow(2, 3), 3);
        assert_eq!(f7.binom3(1).unwrap(), 3);
        assert_eq!(f5.binom3(3).unwrap(), 1);
        assert_eq!(Fp::new(3).unwrap().binom3(2), Err(FieldError::RequiresP5));
    }

    #[test]
    fn scalar_modulus_guard() {
        let a = Scalar::new(2, Fp::new(5).unwrap());
        let b = Scalar::new(2, Fp::new(7).unwrap());
        assert_eq!(
            field_arith(a, b, ArithOp::Add),
            Err(FieldError::ModulusMismatch(5, 7))
        );
        let c = Scalar::new(-3, Fp::new(5).unwrap());
        assert_eq!(c.value, 2);
        assert_eq!(field_arith(a, c, ArithOp::Mul).unwrap().value, 4);
    }
}
