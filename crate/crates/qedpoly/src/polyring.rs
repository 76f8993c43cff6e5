//! Exact multivariate polynomial arithmetic over the integers.
//!
//! Variables are edge parameters `a<id>` indexed by `u32` ids; coefficients
//! are arbitrary-precision integers. Polynomials are stored in a canonical
//! graded order at all times, so structural equality is mathematical
//! equality and `to_string` output is deterministic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Variable identifier; graph code uses edge ids as variable ids.
pub type Var = u32;

/// A power product of variables with positive exponents.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Monomial {
    exps: BTreeMap<Var, u32>,
}

impl Monomial {
    /// The empty product.
    pub fn one() -> Self {
        Monomial::default()
    }

    /// The single variable `a<v>`.
    pub fn var(v: Var) -> Self {
        let mut exps = BTreeMap::new();
        exps.insert(v, 1);
        Monomial { exps }
    }

    /// Builds a monomial from (variable, exponent) pairs, dropping zero exponents.
    pub fn from_exps<I: IntoIterator<Item = (Var, u32)>>(iter: I) -> Self {
        let mut exps = BTreeMap::new();
        for (v, e) in iter {
            if e > 0 {
                *exps.entry(v).or_insert(0) += e;
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.exps.values().sum()
    }

    /// Exponent of `v` (zero if absent).
    pub fn exponent(&self, v: Var) -> u32 {
        self.exps.get(&v).copied().unwrap_or(0)
    }

    /// Variables with positive exponent, ascending.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.keys().copied()
    }

    pub fn exps(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.exps.iter().map(|(&v, &e)| (v, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (&v, &e) in &other.exps {
            *exps.entry(v).or_insert(0) += e;
        }
        Monomial { exps }
    }

    /// Exact division; `None` if some exponent of `other` exceeds ours.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps.clone();
        for (&v, &e) in &other.exps {
            let have = exps.get_mut(&v)?;
            if *have < e {
                return None;
            }
            *have -= e;
            if *have == 0 {
                exps.remove(&v);
            }
        }
        Some(Monomial { exps })
    }

    /// Variable-wise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .filter_map(|(&v, &e)| {
                let o = other.exponent(v);
                if o == 0 {
                    None
                } else {
                    Some((v, e.min(o)))
                }
            })
            .collect();
        Monomial { exps }
    }

    /// Variable-wise maximum of exponents.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (&v, &e) in &other.exps {
            let have = exps.entry(v).or_insert(0);
            *have = (*have).max(e);
        }
        Monomial { exps }
    }

    fn without_var(&self, v: Var) -> Monomial {
        let mut exps = self.exps.clone();
        exps.remove(&v);
        Monomial { exps }
    }
}

impl Ord for Monomial {
    /// Graded order: lower total degree first; ties broken at the first
    /// variable (ascending id) whose exponent differs, higher exponent first.
    /// Degree-one blocks read `a1 < a2 < a3`, degree-two blocks read
    /// `a1^2 < a1*a2 < a1*a3 < a2^2 < ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut a = self.exps.iter();
            let mut b = other.exps.iter();
            let (mut na, mut nb) = (a.next(), b.next());
            loop {
                match (na, nb) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Less,
                    (None, Some(_)) => return Ordering::Greater,
                    (Some((&va, &ea)), Some((&vb, &eb))) => {
                        if va != vb {
                            return if va < vb { Ordering::Less } else { Ordering::Greater };
                        }
                        if ea != eb {
                            return if ea > eb { Ordering::Less } else { Ordering::Greater };
                        }
                        na = a.next();
                        nb = b.next();
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&v, &e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "a{v}")?;
            } else {
                write!(f, "a{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// An exact integer polynomial in the edge variables, canonically sorted.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::one(), c.into());
        p
    }

    /// The variable `a<v>` as a polynomial.
    pub fn var(v: Var) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::var(v), BigInt::one());
        p
    }

    pub fn monomial<C: Into<BigInt>>(m: Monomial, c: C) -> Self {
        let mut p = Poly::default();
        p.add_term(m, c.into());
        p
    }

    /// Canonicalizes an arbitrary term list: merges duplicate monomials and
    /// drops zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(iter: I) -> Self {
        let mut p = Poly::default();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True if every exponent is at most one.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.exps().all(|(_, e)| e <= 1))
    }

    /// Common degree of all terms, if the polynomial is homogeneous.
    /// The zero polynomial counts as homogeneous of every degree (`Some(0)`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = match it.next() {
            None => return Some(0),
            Some(d) => d,
        };
        it.all(|d| d == first).then_some(first)
    }

    /// Exact partial derivative with respect to `a<v>`.
    pub fn partial(&self, v: Var) -> Poly {
        let mut p = Poly::default();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut reduced = m.without_var(v);
            if e > 1 {
                reduced = reduced.mul(&Monomial::from_exps([(v, e - 1)]));
            }
            p.add_term(reduced, c * BigInt::from(e));
        }
        p
    }

    /// Substitutes the integer `value` for `a<v>`.
    pub fn substitute(&self, v: Var, value: i64) -> Poly {
        let value = BigInt::from(value);
        let mut p = Poly::default();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                p.add_term(m.clone(), c.clone());
            } else if !value.is_zero() {
                p.add_term(m.without_var(v), c * value.pow(e));
            }
        }
        p
    }

    /// Monomial content: the variable-wise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut content = match it.next() {
            None => return Monomial::one(),
            Some(m) => m.clone(),
        };
        for m in it {
            content = content.gcd(m);
            if content.is_one() {
                break;
            }
        }
        content
    }

    /// Exact multivariate division; `None` if `self` is not a polynomial
    /// multiple of `divisor`. Dividing by zero returns `None` unless `self`
    /// is zero.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (dm, dc) = divisor.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Poly::default();
        while let Some((rm, rc)) = rem.terms.iter().next_back() {
            let qm = rm.try_div(dm)?;
            let (qc, rest) = num_integer::div_rem(rc.clone(), dc.clone());
            if !rest.is_zero() || qc.is_zero() {
                return None;
            }
            let piece = Poly::monomial(qm, qc);
            rem -= &(&piece * divisor);
            quot += &piece;
        }
        Some(quot)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Non-negative integer power.
    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.magnitude();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        *self += &rhs;
    }
}

impl SubAssign<Poly> for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        *self -= &rhs;
    }
}

impl MulAssign<&Poly> for Poly {
    fn mul_assign(&mut self, rhs: &Poly) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut out = Poly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut out = Poly::one();
        for p in iter {
            out *= &p;
        }
        out
    }
}

/// A finite Laurent polynomial in the dimensional-regularization parameter,
/// with `Poly` coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct EpsLaurent {
    coeffs: BTreeMap<i32, Poly>,
}

impl EpsLaurent {
    pub fn zero() -> Self {
        EpsLaurent::default()
    }

    /// A plain polynomial as the eps^0 slice.
    pub fn from_poly(p: Poly) -> Self {
        EpsLaurent::single(0, p)
    }

    pub fn one() -> Self {
        EpsLaurent::from_poly(Poly::one())
    }

    /// `p * eps^k`.
    pub fn single(k: i32, p: Poly) -> Self {
        let mut out = EpsLaurent::default();
        out.add_slice(k, p);
        out
    }

    /// The linear polynomial `eps + c`.
    pub fn eps_plus(c: i64) -> Self {
        let mut out = EpsLaurent::single(1, Poly::one());
        out.add_slice(0, Poly::constant(c));
        out
    }

    pub fn add_slice(&mut self, k: i32, p: Poly) {
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(k) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += &p;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(p);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient polynomial of eps^k (zero if absent).
    pub fn coeff(&self, k: i32) -> Poly {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Nonzero slices in ascending eps power.
    pub fn slices(&self) -> impl Iterator<Item = (i32, &Poly)> {
        self.coeffs.iter().map(|(&k, p)| (k, p))
    }

    pub fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplies by eps^k.
    pub fn shifted(&self, k: i32) -> EpsLaurent {
        EpsLaurent {
            coeffs: self.coeffs.iter().map(|(&j, p)| (j + k, p.clone())).collect(),
        }
    }

    /// Multiplies every slice by a polynomial.
    pub fn scale_poly(&self, p: &Poly) -> EpsLaurent {
        let mut out = EpsLaurent::default();
        for (&k, q) in &self.coeffs {
            out.add_slice(k, q * p);
        }
        out
    }

    /// Multiplies every slice by an integer.
    pub fn scale_int(&self, c: &BigInt) -> EpsLaurent {
        let mut out = EpsLaurent::default();
        for (&k, q) in &self.coeffs {
            out.add_slice(k, q.scale(c));
        }
        out
    }
}

impl AddAssign<&EpsLaurent> for EpsLaurent {
    fn add_assign(&mut self, rhs: &EpsLaurent) {
        for (&k, p) in &rhs.coeffs {
            self.add_slice(k, p.clone());
        }
    }
}

impl Add<&EpsLaurent> for &EpsLaurent {
    type Output = EpsLaurent;
    fn add(self, rhs: &EpsLaurent) -> EpsLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&EpsLaurent> for &EpsLaurent {
    type Output = EpsLaurent;
    fn sub(self, rhs: &EpsLaurent) -> EpsLaurent {
        let mut out = self.clone();
        for (&k, p) in &rhs.coeffs {
            out.add_slice(k, -p);
        }
        out
    }
}

impl Mul<&EpsLaurent> for &EpsLaurent {
    type Output = EpsLaurent;
    fn mul(self, rhs: &EpsLaurent) -> EpsLaurent {
        let mut out = EpsLaurent::default();
        for (&ka, pa) in &self.coeffs {
            for (&kb, pb) in &rhs.coeffs {
                out.add_slice(ka + kb, pa * pb);
            }
        }
        out
    }
}

impl Neg for &EpsLaurent {
    type Output = EpsLaurent;
    fn neg(self) -> EpsLaurent {
        EpsLaurent {
            coeffs: self.coeffs.iter().map(|(&k, p)| (k, -p)).collect(),
        }
    }
}

impl MulAssign<&EpsLaurent> for EpsLaurent {
    fn mul_assign(&mut self, rhs: &EpsLaurent) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for EpsLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&k, p)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({p})")?,
                1 => write!(f, "eps*({p})")?,
                _ => write!(f, "eps^{k}*({p})")?,
            }
        }
        Ok(())
    }
}
