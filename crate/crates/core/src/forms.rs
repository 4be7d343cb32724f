//! Exterior algebra of polynomial differential forms on affine space.
//!
//! A q-form is a map from strictly increasing index tuples (i1 < ... < iq)
//! to polynomial coefficients. Implemented operations: wedge product,
//! exterior derivative, interior product with a polynomial vector field,
//! pullback along a polynomial map, and the descent and integrability
//! checks used to certify that a 2-form on C^4 defines a foliation of P^3.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::mpoly::{parse_poly, MPoly, VarSet};
use crate::qfield::FieldElem;

/// Polynomial vector field on C^n: n components, each in n variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PVField {
    components: Vec<MPoly>,
}

impl PVField {
    pub fn new(components: Vec<MPoly>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::dim("vector field needs at least one component"));
        }
        if components.iter().any(|p| p.nvars() != n) {
            return Err(Error::dim(format!(
                "vector field on C^{n} needs components in {n} variables"
            )));
        }
        Ok(PVField { components })
    }

    /// The radial (Euler) field R = sum x_k d/dx_k.
    pub fn radial(nvars: usize) -> Self {
        PVField {
            components: (0..nvars).map(|k| MPoly::var(nvars, k)).collect(),
        }
    }

    /// The coordinate field d/dx_k.
    pub fn coordinate(nvars: usize, k: usize) -> Self {
        let mut components = vec![MPoly::zero(nvars); nvars];
        components[k] = MPoly::one(nvars);
        PVField { components }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, k: usize) -> &MPoly {
        &self.components[k]
    }

    pub fn components(&self) -> &[MPoly] {
        &self.components
    }
}

/// Polynomial differential q-form. Zero coefficients are never stored, so
/// equality and iteration order are canonical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PForm {
    nvars: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, MPoly>,
}

impl PForm {
    /// The zero q-form. Degrees beyond nvars are legal but carry no terms.
    pub fn zero(nvars: usize, degree: usize) -> Self {
        PForm { nvars, degree, coeffs: BTreeMap::new() }
    }

    /// dx_0 ^ ... ^ dx_{n-1} with unit coefficient.
    pub fn volume(nvars: usize) -> Self {
        let mut f = PForm::zero(nvars, nvars);
        f.add_term((0..nvars).collect::<Vec<_>>().as_slice(), MPoly::one(nvars));
        f
    }

    /// A 0-form wrapping a polynomial.
    pub fn from_poly(p: MPoly) -> Self {
        let mut f = PForm::zero(p.nvars(), 0);
        f.add_term(&[], p);
        f
    }

    /// The differential dp of a polynomial, as a 1-form.
    pub fn differential(p: &MPoly) -> Self {
        let n = p.nvars();
        let mut f = PForm::zero(n, 1);
        for k in 0..n {
            f.add_term(&[k], p.partial_derivative(k));
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of dx_{idx[0]} ^ ... (indices must be strictly increasing).
    pub fn coeff(&self, idx: &[usize]) -> MPoly {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| MPoly::zero(self.nvars))
    }

    /// Terms in ascending lexicographic order of index tuples.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &MPoly)> {
        self.coeffs.iter()
    }

    /// Merge a coefficient onto a strictly increasing index tuple.
    pub fn add_term(&mut self, idx: &[usize], p: MPoly) {
        assert_eq!(idx.len(), self.degree, "index tuple length must equal the form degree");
        assert!(
            idx.windows(2).all(|w| w[0] < w[1]),
            "index tuple must be strictly increasing"
        );
        assert!(
            idx.iter().all(|&k| k < self.nvars),
            "index out of range for {} variables",
            self.nvars
        );
        assert_eq!(p.nvars(), self.nvars, "coefficient variable count mismatch");
        if p.is_zero() {
            return;
        }
        match self.coeffs.entry(idx.to_vec()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Merge with an arbitrary (possibly unsorted) index tuple, folding in
    /// the permutation sign; tuples with a repeated index contribute zero.
    fn add_term_unsorted(&mut self, idx: &[usize], p: MPoly) {
        if p.is_zero() {
            return;
        }
        let mut sorted: Vec<usize> = idx.to_vec();
        let mut sign = 1i32;
        // Insertion sort, counting transpositions.
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let signed = if sign == 1 { p } else { -&p };
        self.add_term(&sorted, signed);
    }

    pub fn scale(&self, k: &FieldElem) -> PForm {
        let mut out = PForm::zero(self.nvars, self.degree);
        for (idx, p) in &self.coeffs {
            out.add_term(idx, p.scale(k));
        }
        out
    }

    pub fn mul_poly(&self, q: &MPoly) -> PForm {
        assert_eq!(q.nvars(), self.nvars, "coefficient variable count mismatch");
        let mut out = PForm::zero(self.nvars, self.degree);
        for (idx, p) in &self.coeffs {
            out.add_term(idx, p * q);
        }
        out
    }

    pub fn add(&self, other: &PForm) -> PForm {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert_eq!(self.degree, other.degree, "cannot add forms of different degree");
        let mut out = self.clone();
        for (idx, p) in &other.coeffs {
            out.add_term(idx, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &PForm) -> PForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PForm {
        let mut out = PForm::zero(self.nvars, self.degree);
        for (idx, p) in &self.coeffs {
            out.add_term(idx, -p);
        }
        out
    }

    /// Wedge product. Degrees add; if they exceed nvars the result is the
    /// zero form of that degree.
    pub fn wedge(&self, other: &PForm) -> PForm {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = PForm::zero(self.nvars, self.degree + other.degree);
        if self.degree + other.degree > self.nvars {
            return out;
        }
        for (idx1, p1) in &self.coeffs {
            for (idx2, p2) in &other.coeffs {
                let mut idx: Vec<usize> = Vec::with_capacity(idx1.len() + idx2.len());
                idx.extend_from_slice(idx1);
                idx.extend_from_slice(idx2);
                out.add_term_unsorted(&idx, p1 * p2);
            }
        }
        out
    }

    /// Exterior derivative d.
    pub fn exterior_derivative(&self) -> PForm {
        let mut out = PForm::zero(self.nvars, self.degree + 1);
        if self.degree + 1 > self.nvars {
            return out;
        }
        for (idx, p) in &self.coeffs {
            for k in 0..self.nvars {
                let dp = p.partial_derivative(k);
                if dp.is_zero() {
                    continue;
                }
                let mut full = Vec::with_capacity(idx.len() + 1);
                full.push(k);
                full.extend_from_slice(idx);
                out.add_term_unsorted(&full, dp);
            }
        }
        out
    }

    /// Interior product (contraction) i_X, an anti-derivation of degree -1.
    pub fn interior_product(&self, field: &PVField) -> Result<PForm> {
        if field.nvars() != self.nvars {
            return Err(Error::dim(format!(
                "contraction of a form on C^{} with a field on C^{}",
                self.nvars,
                field.nvars()
            )));
        }
        if self.degree == 0 {
            return Err(Error::domain("interior product of a 0-form is undefined"));
        }
        let mut out = PForm::zero(self.nvars, self.degree - 1);
        for (idx, p) in &self.coeffs {
            for (j, &k) in idx.iter().enumerate() {
                let xk = field.component(k);
                if xk.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(jj, _)| *jj != j)
                    .map(|(_, &v)| v)
                    .collect();
                let contrib = p * xk;
                let signed = if j % 2 == 0 { contrib } else { -&contrib };
                out.add_term(&rest, signed);
            }
        }
        Ok(out)
    }

    /// Pullback along the polynomial map x -> images (images[k] is the k-th
    /// coordinate function of the map, written in the source variables).
    pub fn pullback(&self, images: &[MPoly]) -> Result<PForm> {
        if images.len() != self.nvars {
            return Err(Error::dim(format!(
                "pullback of a form on C^{} along a map with {} components",
                self.nvars,
                images.len()
            )));
        }
        let m = images.first().map(|p| p.nvars()).unwrap_or(0);
        if m == 0 || images.iter().any(|p| p.nvars() != m) {
            return Err(Error::dim("pullback images disagree on variable count"));
        }
        let differentials: Vec<PForm> = images.iter().map(PForm::differential).collect();
        let mut out = PForm::zero(m, self.degree);
        for (idx, p) in &self.coeffs {
            let mut acc = PForm::from_poly(p.substitute(images)?);
            for &k in idx {
                acc = acc.wedge(&differentials[k]);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Canonical text rendering: one line `dxI^dxJ : coefficient` per term
    /// in ascending tuple order, `0` for the zero form. Degree-0 terms use
    /// the symbol `1` in place of the wedge monomial.
    pub fn format(&self, vars: &VarSet) -> String {
        assert_eq!(vars.len(), self.nvars, "variable set size mismatch");
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut lines = Vec::new();
        for (idx, p) in &self.coeffs {
            let wedge = if idx.is_empty() {
                "1".to_string()
            } else {
                idx.iter()
                    .map(|&k| format!("d{}", vars.name(k)))
                    .collect::<Vec<_>>()
                    .join("^")
            };
            lines.push(format!("{} : {}", wedge, p.format(vars)));
        }
        lines.join("\n")
    }
}

/// Parse the canonical 2-form text format. Blank lines and lines starting
/// with `#` are ignored; a body consisting of the single token `0` is the
/// zero 2-form. Every term line must read `dxI^dxJ^... : <polynomial>`
/// with strictly increasing, non-repeating indices and a consistent degree.
pub fn parse_form(text: &str, vars: &VarSet) -> Result<PForm> {
    let nvars = vars.len();
    let mut content: Vec<(usize, &str)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        content.push((lineno + 1, line));
    }
    if content.len() == 1 && content[0].1 == "0" {
        return Ok(PForm::zero(nvars, 2));
    }
    let mut form: Option<PForm> = None;
    for (lineno, line) in content {
        let (wedge_part, poly_part) = line.split_once(':').ok_or_else(|| {
            Error::parse(lineno, 1, "expected `dxI^dxJ : polynomial` with a `:` separator")
        })?;
        let mut idx = Vec::new();
        for tok in wedge_part.trim().split('^') {
            let tok = tok.trim();
            let name = tok.strip_prefix('d').ok_or_else(|| {
                Error::parse(lineno, 1, format!("expected a differential like `dx0`, found `{tok}`"))
            })?;
            let k = vars.index_of(name).ok_or_else(|| {
                Error::parse(lineno, 1, format!("unknown variable `{name}` in differential `{tok}`"))
            })?;
            idx.push(k);
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(
                lineno,
                1,
                "differential indices must be strictly increasing",
            ));
        }
        let poly = parse_poly(poly_part, vars).map_err(|e| match e {
            // Positions inside the polynomial are relative to the substring;
            // re-anchor them to the file line.
            Error::Parse { line: _, col, msg } => {
                Error::parse(lineno, wedge_part.len() + 1 + col, msg)
            }
            other => other,
        })?;
        let f = form.get_or_insert_with(|| PForm::zero(nvars, idx.len()));
        if idx.len() != f.degree() {
            return Err(Error::parse(lineno, 1, "inconsistent form degree between lines"));
        }
        if !f.coeff(&idx).is_zero() {
            return Err(Error::parse(lineno, 1, "duplicate differential term"));
        }
        f.add_term(&idx, poly);
    }
    form.ok_or_else(|| Error::parse(1, 1, "empty form description"))
}

/// Foliation certificate for a 2-form on C^4: annihilated by the radial
/// field (descends to P^3), decomposable (eta ^ eta = 0), and integrable
/// (every contraction i_a i_b eta multiplies d eta to zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentReport {
    pub radial: bool,
    pub decomposable: bool,
    pub contraction_integrable: bool,
}

impl DescentReport {
    pub fn pass(&self) -> bool {
        self.radial && self.decomposable && self.contraction_integrable
    }
}

/// Run the descent and integrability checks on a 2-form.
pub fn descent_checks(eta: &PForm) -> Result<DescentReport> {
    if eta.degree() != 2 {
        return Err(Error::domain(format!(
            "descent checks apply to 2-forms, got degree {}",
            eta.degree()
        )));
    }
    let n = eta.nvars();
    let radial = eta.interior_product(&PVField::radial(n))?.is_zero();
    let decomposable = eta.wedge(eta).is_zero();
    let deta = eta.exterior_derivative();
    let mut contraction_integrable = true;
    'outer: for a in 0..n {
        for b in (a + 1)..n {
            // i_a i_b eta is (up to sign) the (a,b) coefficient of eta.
            let mut idx = vec![a, b];
            idx.sort_unstable();
            let pab = eta.coeff(&idx);
            if pab.is_zero() {
                continue;
            }
            if !deta.mul_poly(&pab).is_zero() {
                contraction_integrable = false;
                break 'outer;
            }
        }
    }
    Ok(DescentReport { radial, decomposable, contraction_integrable })
}

/// The 2-form i_R i_X (dx0^dx1^dx2^dx3) induced by a vector field on C^4.
pub fn form_from_vector_field(field: &PVField) -> Result<PForm> {
    if field.nvars() != 4 {
        return Err(Error::dim(format!(
            "the induced 2-form construction lives on C^4, got C^{}",
            field.nvars()
        )));
    }
    let vol = PForm::volume(4);
    let ix = vol.interior_product(field)?;
    ix.interior_product(&PVField::radial(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rat;

    fn dx(k: usize) -> PForm {
        let mut f = PForm::zero(4, 1);
        f.add_term(&[k], MPoly::one(4));
        f
    }

    fn x(k: usize) -> MPoly {
        MPoly::var(4, k)
    }

    #[test]
    fn wedge_is_antisymmetric_and_absorbs_repeats() {
        let a = dx(0);
        let b = dx(1);
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        assert!(a.wedge(&a).is_zero());
        let ab = a.wedge(&b);
        let ac = dx(0).wedge(&dx(2));
        assert!(ab.wedge(&ac).is_zero(), "shared differential collapses");
        assert_eq!(ab.wedge(&dx(2).wedge(&dx(3))), PForm::volume(4));
    }

    #[test]
    fn exterior_derivative_squares_to_zero() {
        // d(x0 dx1) = dx0 ^ dx1, and d of that vanishes.
        let omega = dx(1).mul_poly(&x(0));
        let domega = omega.exterior_derivative();
        assert_eq!(domega, dx(0).wedge(&dx(1)));
        assert!(domega.exterior_derivative().is_zero());
        // On a messier coefficient too.
        let messy = dx(2).mul_poly(&(&(&x(0) * &x(1)) + &x(3).pow(2)));
        assert!(messy.exterior_derivative().exterior_derivative().is_zero());
    }

    #[test]
    fn interior_product_with_radial_field() {
        let r = PVField::radial(4);
        let got = dx(0).wedge(&dx(1)).interior_product(&r).unwrap();
        let expected = dx(1).mul_poly(&x(0)).sub(&dx(0).mul_poly(&x(1)));
        assert_eq!(got, expected);
        assert!(PForm::from_poly(x(0)).interior_product(&r).is_err());
    }

    #[test]
    fn induced_form_of_a_single_component_field() {
        // X = x0*x1 d/dx1 gives i_R i_X vol =
        //   -x0^2*x1 dx2^dx3 + x0*x1*x2 dx0^dx3 - x0*x1*x3 dx0^dx2.
        let p = &x(0) * &x(1);
        let field = PVField::new(vec![
            MPoly::zero(4),
            p.clone(),
            MPoly::zero(4),
            MPoly::zero(4),
        ])
        .unwrap();
        let eta = form_from_vector_field(&field).unwrap();
        let mut expected = PForm::zero(4, 2);
        expected.add_term(&[2, 3], -&(&p * &x(0)));
        expected.add_term(&[0, 3], &p * &x(2));
        expected.add_term(&[0, 2], -&(&p * &x(3)));
        assert_eq!(eta, expected);
        // Any induced form is annihilated by R.
        assert!(eta.interior_product(&PVField::radial(4)).unwrap().is_zero());
    }

    #[test]
    fn pullback_respects_wedge_and_d() {
        // Map C^2 -> C^4: (t0, t1) -> (t0^2, t0*t1, t1, t0 + t1).
        let t = |k: usize| MPoly::var(2, k);
        let images = vec![t(0).pow(2), &t(0) * &t(1), t(1), &t(0) + &t(1)];
        let omega = dx(0).mul_poly(&x(1)); // x1 dx0
        let eta = dx(2).wedge(&dx(3)).mul_poly(&x(0));
        let lhs = omega.wedge(&eta).pullback(&images).unwrap();
        let rhs = omega
            .pullback(&images)
            .unwrap()
            .wedge(&eta.pullback(&images).unwrap());
        assert_eq!(lhs, rhs);
        let lhs_d = omega.exterior_derivative().pullback(&images).unwrap();
        let rhs_d = omega.pullback(&images).unwrap().exterior_derivative();
        assert_eq!(lhs_d, rhs_d);
    }

    #[test]
    fn descent_checks_distinguish_examples() {
        // dx0^dx1 is decomposable and closed but not radial.
        let simple = dx(0).wedge(&dx(1));
        let report = descent_checks(&simple).unwrap();
        assert!(!report.radial && report.decomposable && report.contraction_integrable);
        assert!(!report.pass());
        // dx0^dx1 + dx2^dx3 is not decomposable.
        let sympl = simple.add(&dx(2).wedge(&dx(3)));
        let report = descent_checks(&sympl).unwrap();
        assert!(!report.decomposable);
        assert!(descent_checks(&dx(0)).is_err());
    }

    #[test]
    fn form_text_round_trip() {
        let vars = VarSet::x(4);
        let mut eta = PForm::zero(4, 2);
        eta.add_term(&[0, 1], &x(2) * &x(3));
        eta.add_term(&[1, 3], -&(&x(0) * &x(2)));
        let text = eta.format(&vars);
        assert_eq!(text, "dx0^dx1 : x2*x3\ndx1^dx3 : -x0*x2");
        assert_eq!(parse_form(&text, &vars).unwrap(), eta);
        assert_eq!(parse_form("0", &vars).unwrap(), PForm::zero(4, 2));
        assert_eq!(PForm::zero(4, 2).format(&vars), "0");
    }

    #[test]
    fn form_parse_errors_are_positioned() {
        let vars = VarSet::x(4);
        assert!(matches!(
            parse_form("dx1^dx0 : x2", &vars),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_form("dx0^dx1 : x2\ndx0^dx1 : x3", &vars),
            Err(Error::Parse { line: 2, .. })
        ));
        match parse_form("dx0^dx1 : x2 + x9", &vars) {
            Err(Error::Parse { line: 1, col, msg }) => {
                assert!(msg.contains("unknown variable `x9`"));
                // Column points inside the original line, past the wedge part.
                assert!(col > "dx0^dx1 :".len());
            }
            other => panic!("expected positioned parse error, got {other:?}"),
        }
        assert!(parse_form("", &vars).is_err());
        assert!(parse_form("dx0+dx1 : x2", &vars).is_err());
    }

    #[test]
    fn scale_and_coeff_access() {
        let mut eta = PForm::zero(4, 2);
        eta.add_term(&[0, 1], x(2));
        let doubled = eta.scale(&FieldElem::from_int(2));
        assert_eq!(doubled.coeff(&[0, 1]), x(2).scale(&FieldElem::from_int(2)));
        assert_eq!(doubled.coeff(&[0, 2]), MPoly::zero(4));
        assert_eq!(eta.scale(&FieldElem::from_rational(rat(0))), PForm::zero(4, 2));
    }
}
