//! Sparse multivariate polynomials over Q(i, sqrt2).
//!
//! Terms live in a BTreeMap keyed by monomials in graded lexicographic
//! order (x0 > x1 > ...), so iteration order, printing and equality are
//! deterministic. At most [`MAX_VARS`] variables; the geometric pipeline
//! needs 4 (P^3 charts), 5 (P^4 charts) and 3 (affine charts).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qfield::{FieldElem, Rational};

mod parse;

pub use parse::{parse_poly, parse_scalar};

/// Hard cap on the number of variables.
pub const MAX_VARS: usize = 6;

/// A power product of the variables, stored as a fixed exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    /// The empty product.
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Single variable x_k.
    pub fn var(k: usize) -> Self {
        Monomial::var_pow(k, 1)
    }

    /// x_k^e.
    pub fn var_pow(k: usize, e: u16) -> Self {
        assert!(k < MAX_VARS, "variable index {k} out of range");
        let mut exps = [0u16; MAX_VARS];
        exps[k] = e;
        Monomial { exps }
    }

    /// Build from an explicit exponent slice (length <= MAX_VARS).
    pub fn from_exps(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many exponents");
        let mut out = [0u16; MAX_VARS];
        out[..exps.len()].copy_from_slice(exps);
        Monomial { exps: out }
    }

    pub fn exp(&self, k: usize) -> u16 {
        self.exps[k]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, weights: &[u64]) -> u64 {
        self.exps
            .iter()
            .zip(weights.iter().chain(std::iter::repeat(&0)))
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for k in 0..MAX_VARS {
            exps[k] = self.exps[k]
                .checked_add(other.exps[k])
                .expect("monomial exponent overflow");
        }
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|k| self.exps[k] <= other.exps[k])
    }

    /// Componentwise quotient; caller must ensure divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        let mut exps = [0u16; MAX_VARS];
        for k in 0..MAX_VARS {
            exps[k] = self.exps[k] - other.exps[k];
        }
        Monomial { exps }
    }

    /// Componentwise minimum (monomial gcd).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for k in 0..MAX_VARS {
            exps[k] = self.exps[k].min(other.exps[k]);
        }
        Monomial { exps }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with x0 > x1 > ...: compare total degree
    /// first, then the exponent vectors lexicographically.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over Q(i, sqrt2) in a fixed number of variables.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: FieldElem) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(Monomial::one(), value);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, FieldElem::one())
    }

    pub fn from_int(nvars: usize, n: i64) -> Self {
        MPoly::constant(nvars, FieldElem::from_int(n))
    }

    /// The variable x_k as a polynomial.
    pub fn var(nvars: usize, k: usize) -> Self {
        assert!(k < nvars, "variable index {k} out of range for {nvars} variables");
        let mut p = MPoly::zero(nvars);
        p.add_term(Monomial::var(k), FieldElem::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: &[(&[u16], FieldElem)]) -> Self {
        let mut p = MPoly::zero(nvars);
        for (exps, coeff) in terms {
            p.add_term(Monomial::from_exps(exps), coeff.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_else(FieldElem::zero)
    }

    /// Merge one term, dropping the entry if the coefficient cancels.
    pub fn add_term(&mut self, m: Monomial, coeff: FieldElem) {
        debug_assert!(
            (self.nvars..MAX_VARS).all(|k| m.exp(k) == 0),
            "monomial uses variables beyond nvars"
        );
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn assert_same_nvars(&self, other: &MPoly, op: &str) {
        assert!(
            self.nvars == other.nvars,
            "{op} on polynomials with {} and {} variables",
            self.nvars,
            other.nvars
        );
    }

    /// Arity-checked addition for untrusted inputs; operators panic instead.
    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly> {
        if self.nvars != other.nvars {
            return Err(Error::dim(format!(
                "cannot add polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(self + other)
    }

    /// Arity-checked multiplication for untrusted inputs.
    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly> {
        if self.nvars != other.nvars {
            return Err(Error::dim(format!(
                "cannot multiply polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(self * other)
    }

    pub fn scale(&self, k: &FieldElem) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(*m, c * k);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, coeff: &FieldElem) -> MPoly {
        if coeff.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = MPoly::zero(self.nvars);
        for (mm, c) in &self.terms {
            out.terms.insert(mm.mul(m), c * coeff);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitute images[k] for x_k. All images must share a common variable
    /// count, which becomes the variable count of the result.
    pub fn substitute(&self, images: &[MPoly]) -> Result<MPoly> {
        if images.len() != self.nvars {
            return Err(Error::dim(format!(
                "substitute expects {} images, got {}",
                self.nvars,
                images.len()
            )));
        }
        if self.nvars == 0 {
            return Ok(self.clone());
        }
        let m = images[0].nvars;
        if images.iter().any(|img| img.nvars != m) {
            return Err(Error::dim("substitution images disagree on variable count"));
        }
        // Cache powers of each image up to the largest exponent that occurs.
        let mut max_exp = vec![0u16; self.nvars];
        for mono in self.terms.keys() {
            for (k, me) in max_exp.iter_mut().enumerate() {
                *me = (*me).max(mono.exp(k));
            }
        }
        let mut powers: Vec<Vec<MPoly>> = Vec::with_capacity(self.nvars);
        for k in 0..self.nvars {
            let mut col = vec![MPoly::one(m)];
            for e in 1..=max_exp[k] as usize {
                let next = &col[e - 1] * &images[k];
                col.push(next);
            }
            powers.push(col);
        }
        let mut out = MPoly::zero(m);
        for (mono, coeff) in &self.terms {
            let mut prod = MPoly::constant(m, coeff.clone());
            for (k, col) in powers.iter().enumerate() {
                let e = mono.exp(k) as usize;
                if e > 0 {
                    prod = &prod * &col[e];
                }
            }
            out += &prod;
        }
        Ok(out)
    }

    /// Evaluate at a point with exact scalar arithmetic.
    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::dim(format!(
                "eval expects {} coordinates, got {}",
                self.nvars,
                point.len()
            )));
        }
        let mut acc = FieldElem::zero();
        for (mono, coeff) in &self.terms {
            let mut t = coeff.clone();
            for (k, x) in point.iter().enumerate() {
                let e = mono.exp(k);
                if e > 0 {
                    t = &t * &x.pow(e as u32);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, k: usize) -> MPoly {
        assert!(k < self.nvars, "variable index {k} out of range");
        let mut out = MPoly::zero(self.nvars);
        for (mono, coeff) in &self.terms {
            let e = mono.exp(k);
            if e == 0 {
                continue;
            }
            let mut exps = [0u16; MAX_VARS];
            for j in 0..MAX_VARS {
                exps[j] = mono.exp(j);
            }
            exps[k] -= 1;
            out.add_term(Monomial { exps }, coeff.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    /// Largest total degree among terms; None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Some(d) when every term has total degree d, None when inhomogeneous,
    /// error for the zero polynomial (its degree is undefined).
    pub fn homogeneity(&self) -> Result<Option<u64>> {
        self.weighted_homogeneity(&vec![1; self.nvars])
    }

    /// Largest weighted degree among terms; error for the zero polynomial.
    pub fn weighted_degree(&self, weights: &[u64]) -> Result<u64> {
        if weights.len() != self.nvars {
            return Err(Error::dim(format!(
                "expected {} weights, got {}",
                self.nvars,
                weights.len()
            )));
        }
        self.terms
            .keys()
            .map(|m| m.weighted_degree(weights))
            .max()
            .ok_or_else(|| Error::domain("degree of the zero polynomial is undefined"))
    }

    /// Some(d) when every term has weighted degree d under `weights`.
    pub fn weighted_homogeneity(&self, weights: &[u64]) -> Result<Option<u64>> {
        if weights.len() != self.nvars {
            return Err(Error::dim(format!(
                "expected {} weights, got {}",
                self.nvars,
                weights.len()
            )));
        }
        let mut iter = self.terms.keys();
        let first = iter
            .next()
            .ok_or_else(|| Error::domain("degree of the zero polynomial is undefined"))?
            .weighted_degree(weights);
        for m in iter {
            if m.weighted_degree(weights) != first {
                return Ok(None);
            }
        }
        Ok(Some(first))
    }

    /// Split off the largest monomial factor: p = m * q with q not divisible
    /// by any variable. Error for the zero polynomial.
    pub fn monomial_content(&self) -> Result<(Monomial, MPoly)> {
        let mut iter = self.terms.keys();
        let mut g = *iter
            .next()
            .ok_or_else(|| Error::domain("monomial content of zero is undefined"))?;
        for m in iter {
            g = g.gcd(m);
            if g.is_one() {
                break;
            }
        }
        let mut q = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            q.terms.insert(m.div(&g), c.clone());
        }
        Ok((g, q))
    }

    /// Exact division by a monomial; error when some term is not divisible.
    pub fn exact_div_monomial(&self, m: &Monomial) -> Result<MPoly> {
        let mut out = MPoly::zero(self.nvars);
        for (mm, c) in &self.terms {
            if !m.divides(mm) {
                return Err(Error::domain(format!(
                    "polynomial is not divisible by the monomial with exponents {:?}",
                    &m.exps[..self.nvars]
                )));
            }
            out.terms.insert(mm.div(m), c.clone());
        }
        Ok(out)
    }

    /// Canonical text form; see [`VarSet`] for the naming.
    pub fn format(&self, vars: &VarSet) -> String {
        assert!(vars.len() == self.nvars, "variable set size mismatch");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (mono, coeff) in self.terms.iter().rev() {
            let mono_str = format_monomial(mono, vars);
            let components = [&coeff.a, &coeff.b, &coeff.c, &coeff.d]
                .iter()
                .filter(|r| !r.is_zero())
                .count();
            if components >= 2 {
                if !out.is_empty() {
                    out.push_str(" + ");
                }
                if mono_str.is_empty() {
                    out.push_str(&coeff.to_string());
                } else {
                    out.push('(');
                    out.push_str(&coeff.to_string());
                    out.push_str(")*");
                    out.push_str(&mono_str);
                }
                continue;
            }
            // Single basis component: fold the sign into the separator.
            let rendered = coeff.to_string();
            let (negative, body) = match rendered.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, rendered),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if mono_str.is_empty() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&mono_str);
            } else {
                out.push_str(&body);
                out.push('*');
                out.push_str(&mono_str);
            }
        }
        out
    }
}

fn format_monomial(m: &Monomial, vars: &VarSet) -> String {
    let mut parts = Vec::new();
    for k in 0..vars.len() {
        let e = m.exp(k);
        if e == 1 {
            parts.push(vars.name(k).to_string());
        } else if e > 1 {
            parts.push(format!("{}^{}", vars.name(k), e));
        }
    }
    parts.join("*")
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.assert_same_nvars(rhs, "add");
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        self.assert_same_nvars(rhs, "add");
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.assert_same_nvars(rhs, "subtract");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.assert_same_nvars(rhs, "multiply");
        let mut out = MPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// Ordered set of distinct variable names for parsing and printing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<VarSet> {
        if names.len() > MAX_VARS {
            return Err(Error::dim(format!("at most {MAX_VARS} variables supported")));
        }
        let mut seen = Vec::new();
        for n in names {
            let n = n.as_ref();
            if n.is_empty()
                || !n.chars().next().unwrap().is_ascii_alphabetic()
                || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(Error::domain(format!("invalid variable name `{n}`")));
            }
            if n == "i" || n == "sqrt2" {
                return Err(Error::domain(format!("variable name `{n}` collides with a constant")));
            }
            if seen.contains(&n.to_string()) {
                return Err(Error::domain(format!("duplicate variable name `{n}`")));
            }
            seen.push(n.to_string());
        }
        Ok(VarSet { names: seen })
    }

    /// Projective-chart names x0..x{n-1}.
    pub fn x(n: usize) -> VarSet {
        let names: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
        VarSet::new(&names).expect("generated names are valid")
    }

    /// Affine-chart names w1, w2, w3.
    pub fn w() -> VarSet {
        VarSet::new(&["w1", "w2", "w3"]).expect("static names are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(", "))
    }
}
