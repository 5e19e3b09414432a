//! Multivariate polynomials over a [`Field`] and graded monomial bases.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::scalar::Field;

/// Exponent vector of a monomial in `r` variables.
pub type Monomial = Vec<u32>;

pub fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Graded reverse lexicographic order: higher degree first is *greater*; among
/// equal degrees the monomial with the smaller exponent in the last differing
/// variable is greater.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// All monomials of total degree `d` in `r` variables, listed in descending
/// grevlex order, with a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    vars: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(vars: usize, degree: u32) -> Self {
        let mut monomials = Vec::new();
        if vars == 0 {
            if degree == 0 {
                monomials.push(Vec::new());
            }
        } else {
            let mut current = vec![0u32; vars];
            enumerate(&mut current, 0, degree, &mut monomials);
        }
        monomials.sort_by(|a, b| grevlex_cmp(b, a));
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self { vars, degree, monomials, index }
    }

    /// An empty basis, used for negative degrees.
    pub fn empty(vars: usize) -> Self {
        Self { vars, degree: 0, monomials: Vec::new(), index: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous polynomial of this degree.
    pub fn coordinates<F: Field>(&self, p: &Polynomial<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.len()];
        for (m, c) in p.terms() {
            let i = self
                .index_of(m)
                .unwrap_or_else(|| panic!("monomial {m:?} is not of degree {}", self.degree));
            v[i] = c.clone();
        }
        v
    }

    pub fn polynomial<F: Field>(&self, coords: &[F]) -> Polynomial<F> {
        let mut p = Polynomial::zero(self.vars);
        for (m, c) in self.monomials.iter().zip(coords) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

/// Number of monomials of degree `d` in `r` variables, `C(d + r - 1, r - 1)`.
pub fn monomial_count(vars: usize, d: u32) -> usize {
    if vars == 0 {
        return usize::from(d == 0);
    }
    let (n, k) = (d as usize + vars - 1, vars - 1);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn enumerate(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        enumerate(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

/// Sparse polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F> {
    vars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(vars: usize) -> Self {
        Self { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: F) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, F::one())
    }

    pub fn variable(vars: usize, i: usize) -> Self {
        let mut m = vec![0; vars];
        m[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(m, F::one());
        p
    }

    /// The linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let vars = coeffs.len();
        let mut p = Self::zero(vars);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut m = vec![0; vars];
                m[i] = 1;
                p.add_term(m, F::from_int(c));
            }
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        debug_assert_eq!(m.len(), self.vars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let v = existing.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = v;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Largest total degree of a term, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| degree(m));
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            vars: self.vars,
            terms: self.terms.iter().filter(|(m, _)| degree(m) == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Drops all terms of degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        Self {
            vars: self.vars,
            terms: self.terms.iter().filter(|(m, _)| degree(m) <= d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        Self { vars: self.vars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(self.vars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m: Monomial = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(m, x.clone() * y.clone());
            }
        }
        out
    }

    /// Product truncated to total degree at most `d`.
    pub fn mul_truncated(&self, other: &Self, d: u32) -> Self {
        let mut out = Self::zero(self.vars);
        for (a, x) in &self.terms {
            let da = degree(a);
            if da > d {
                continue;
            }
            for (b, y) in &other.terms {
                if da + degree(b) > d {
                    continue;
                }
                let m: Monomial = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(m, x.clone() * y.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.vars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.vars);
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc + t
        })
    }

    /// Substitutes `x_i -> images[i]` (all images in the same ring).
    pub fn substitute(&self, images: &[Polynomial<F>]) -> Polynomial<F> {
        assert_eq!(images.len(), self.vars);
        let target = images.first().map_or(0, |p| p.vars);
        let mut out = Polynomial::zero(target);
        let mut powers: Vec<Vec<Polynomial<F>>> = images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Terms sorted by descending grevlex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &F)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        v
    }
}

impl<F: Field + fmt::Display> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            let coef = c.to_string();
            let (neg, mag) = match coef.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, coef),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    type P = Polynomial<Rational>;

    #[test]
    fn basis_sizes_match_binomials() {
        for r in 1..5 {
            for d in 0..7 {
                assert_eq!(MonomialBasis::new(r, d).len(), monomial_count(r, d), "r={r} d={d}");
            }
        }
    }

    #[test]
    fn grevlex_order_in_three_vars() {
        let b = MonomialBasis::new(3, 2);
        let expected: Vec<Monomial> =
            vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 2]];
        assert_eq!(b.monomials(), expected.as_slice());
    }

    #[test]
    fn arithmetic() {
        let x = P::variable(2, 0);
        let y = P::variable(2, 1);
        let s = x.add(&y);
        let d = x.sub(&y);
        let prod = s.mul(&d);
        assert_eq!(prod, x.mul(&x).sub(&y.mul(&y)));
        assert_eq!(s.pow(2).coefficient(&[1, 1]), rat(2));
        assert!(prod.is_homogeneous());
        assert_eq!(prod.total_degree(), Some(2));
        assert_eq!(P::one(2).add(&prod).truncate(1), P::one(2));
    }

    #[test]
    fn substitution_and_eval() {
        let p = P::linear(&[1, 2]).pow(2);
        let images = vec![P::variable(1, 0), P::linear(&[-1])];
        // (t - 2t)^2 = t^2
        assert_eq!(p.substitute(&images), P::variable(1, 0).pow(2));
        assert_eq!(p.eval(&[rat(1), rat(1)]), rat(9));
    }

    #[test]
    fn coordinates_round_trip() {
        let b = MonomialBasis::new(3, 3);
        let p = P::linear(&[1, -1, 2]).pow(3);
        let c = b.coordinates(&p);
        assert_eq!(b.polynomial(&c), p);
    }

    #[test]
    fn display() {
        let p = P::linear(&[1, -1]).pow(2);
        assert_eq!(p.to_string(), "x1^2 - 2*x1*x2 + x2^2");
    }
}
