//! Exact arithmetic in the weight lattice `Z^r`.
//!
//! Isotropy weights are only defined up to sign, so edges carry a
//! [`WeightClass`]: the representative whose first nonzero coordinate is
//! positive. Independence and span questions are answered by exact integer
//! elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{GkmError, Result};
use crate::linalg::{solve, EchelonBasis};
use crate::scalar::{rat, to_integer};
use crate::Rational;

/// A linear form on the Lie algebra of the torus, in the basis dual to the
/// integer lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Weight(coords.into())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &Weight) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    fn first_nonzero(&self) -> Option<i64> {
        self.0.iter().copied().find(|&x| x != 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "adding weights of different rank");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "subtracting weights of different rank");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<i64> for &Weight {
    type Output = Weight;
    fn mul(self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }
}

/// A nonzero weight up to sign, stored by its canonical representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Weight", into = "Weight")]
pub struct WeightClass(Weight);

impl WeightClass {
    pub fn rep(&self) -> &Weight {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    /// `true` if `w` is one of the two representatives of this class.
    pub fn matches(&self, w: &Weight) -> bool {
        &self.0 == w || self.0 == -w
    }

    /// Sign `s` with `s * rep == w`, if `w` belongs to the class.
    pub fn sign_of(&self, w: &Weight) -> Option<i64> {
        if &self.0 == w {
            Some(1)
        } else if self.0 == -w {
            Some(-1)
        } else {
            None
        }
    }
}

impl TryFrom<Weight> for WeightClass {
    type Error = GkmError;
    fn try_from(w: Weight) -> Result<Self> {
        canonicalize(&w)
    }
}

impl From<WeightClass> for Weight {
    fn from(c: WeightClass) -> Weight {
        c.0
    }
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.0)
    }
}

impl fmt::Debug for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A weight written as `scale * direction` with `direction` primitive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveDecomposition {
    pub scale: i64,
    pub direction: Weight,
}

/// Sign normalization: first nonzero coordinate positive.
pub fn canonicalize(w: &Weight) -> Result<WeightClass> {
    match w.first_nonzero() {
        None => Err(GkmError::ZeroWeight),
        Some(x) if x < 0 => Ok(WeightClass(-w)),
        Some(_) => Ok(WeightClass(w.clone())),
    }
}

/// Shorthand for building a class from coordinates; panics on the zero vector.
pub fn class(coords: &[i64]) -> WeightClass {
    canonicalize(&Weight::new(coords.to_vec())).expect("nonzero weight")
}

/// Exact rank of a family of integer vectors of common length.
pub fn rank(vectors: &[&Weight]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let n = first.rank();
    if let Some(r) = bareiss_rank(vectors, n) {
        return r;
    }
    let mut basis = EchelonBasis::<Rational>::new(n);
    for v in vectors {
        basis.insert(v.0.iter().map(|&x| rat(x)).collect());
    }
    basis.rank()
}

/// Fraction-free elimination in `i128`; `None` on overflow.
fn bareiss_rank(vectors: &[&Weight], n: usize) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = vectors.iter().map(|v| v.0.iter().map(|&x| x as i128).collect()).collect();
    let rows = m.len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..n {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col];
        for r in rank + 1..rows {
            let factor = m[r][col];
            for c in col..n {
                let a = pivot.checked_mul(m[r][c])?;
                let b = factor.checked_mul(m[rank][c])?;
                m[r][c] = a.checked_sub(b)? / prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        Err(GkmError::InvalidK(k))
    } else {
        Ok(())
    }
}

/// `true` iff every `k`-subset of `ws` is linearly independent. A family with
/// fewer than `k` members must be independent as a whole.
pub fn is_k_independent(ws: &[WeightClass], k: usize) -> Result<bool> {
    Ok(k_dependent_subset(ws, k)?.is_none())
}

/// First dependent subset of size `min(k, |ws|)` in lexicographic order of
/// indices, if any.
pub fn k_dependent_subset(ws: &[WeightClass], k: usize) -> Result<Option<Vec<usize>>> {
    check_k(k)?;
    let size = k.min(ws.len());
    if size == 0 {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let subset: Vec<&Weight> = idx.iter().map(|&i| ws[i].rep()).collect();
        if rank(&subset) < size {
            return Ok(Some(idx));
        }
        // next combination
        let mut i = size;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] < ws.len() - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn primitive_decompose(w: &WeightClass) -> PrimitiveDecomposition {
    let scale = w.rep().content();
    let direction = Weight(w.rep().0.iter().map(|x| x / scale).collect());
    PrimitiveDecomposition { scale, direction }
}

/// Coprimality in the sense used for integer coefficients: the scales of the
/// primitive decompositions are coprime. No independence is required.
pub fn are_coprime(a: &WeightClass, b: &WeightClass) -> bool {
    primitive_decompose(a).scale.gcd(&primitive_decompose(b).scale) == 1
}

/// `true` iff `w` lies in the rational span of the independent pair `a`, `b`.
pub fn in_span2(w: &WeightClass, a: &WeightClass, b: &WeightClass) -> Result<bool> {
    if a.rank() != b.rank() || w.rank() != a.rank() {
        return Err(GkmError::RankMismatch { weight: w.to_string(), expected: a.rank(), found: w.rank() });
    }
    if rank(&[a.rep(), b.rep()]) < 2 {
        return Err(GkmError::DependentPlane(a.to_string(), b.to_string()));
    }
    Ok(rank(&[a.rep(), b.rep(), w.rep()]) == 2)
}

/// A full-rank sublattice or superlattice description given by a basis in
/// ambient coordinates. Used when stored weights are a rescaling of the true
/// weight lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightLattice {
    basis: Vec<Weight>,
}

impl WeightLattice {
    pub fn new(basis: Vec<Weight>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(GkmError::Precondition("empty lattice basis".into()));
        };
        let r = first.rank();
        if let Some(bad) = basis.iter().find(|b| b.rank() != r) {
            return Err(GkmError::RankMismatch { weight: bad.to_string(), expected: r, found: bad.rank() });
        }
        let refs: Vec<&Weight> = basis.iter().collect();
        if basis.len() != r || rank(&refs) != r {
            return Err(GkmError::Precondition(format!("lattice basis must consist of {r} independent vectors")));
        }
        Ok(Self { basis })
    }

    pub fn standard(rank: usize) -> Self {
        Self { basis: (0..rank).map(|i| Weight::unit(rank, i)).collect() }
    }

    pub fn basis(&self) -> &[Weight] {
        &self.basis
    }

    /// Integer coordinates of `w` in the lattice basis; errors if `w` is not
    /// a lattice vector.
    pub fn coordinates(&self, w: &Weight) -> Result<Vec<i64>> {
        let r = self.basis.len();
        if w.rank() != r {
            return Err(GkmError::RankMismatch { weight: w.to_string(), expected: r, found: w.rank() });
        }
        // columns are basis vectors
        let rows: Vec<Vec<Rational>> =
            (0..r).map(|i| self.basis.iter().map(|b| rat(b.0[i])).collect()).collect();
        let a = crate::linalg::Matrix::from_rows(rows, r);
        let rhs: Vec<Rational> = w.0.iter().map(|&x| rat(x)).collect();
        let x = solve(&a, &rhs).ok_or_else(|| GkmError::Internal("lattice basis is singular".into()))?;
        x.iter()
            .map(|q| to_integer(q).ok_or_else(|| GkmError::Precondition(format!("{w} is not in the weight lattice"))))
            .collect()
    }

    /// Primitive decomposition relative to this lattice.
    pub fn decompose(&self, w: &WeightClass) -> Result<PrimitiveDecomposition> {
        let c = self.coordinates(w.rep())?;
        let scale = c.iter().fold(0i64, |g, &x| g.gcd(&x));
        let direction = Weight(w.rep().0.iter().map(|x| x / scale).collect());
        Ok(PrimitiveDecomposition { scale, direction })
    }

    pub fn are_coprime(&self, a: &WeightClass, b: &WeightClass) -> Result<bool> {
        Ok(self.decompose(a)?.scale.gcd(&self.decompose(b)?.scale) == 1)
    }
}
