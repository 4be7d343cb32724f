//! Generalized Lotka-Volterra foliations on P^3.
//!
//! A degree-d foliation of this class is induced by the vector field
//! X = sum_k x_k Q_k d/dx_k on C^4 with homogeneous cofactors Q_k of degree
//! d-1. Its 2-form i_R i_X vol expands into six terms indexed by coordinate
//! pairs with coefficients x_k x_l (Q_k - Q_l) on the complementary pair.
//! This module builds that form, homogenizes affine decoupled systems,
//! enumerates and certifies singular points, and measures degrees.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::forms::{form_from_vector_field, PForm, PVField};
use crate::mpoly::{parse_poly, MPoly, Monomial, VarSet};
use crate::qfield::FieldElem;

/// The six component pairs of a 2-form on C^4, each with its complementary
/// pair and the sign it carries in the Lotka-Volterra normal form.
pub const LV_PAIRS: [([usize; 2], [usize; 2], i32); 6] = [
    ([0, 1], [2, 3], 1),
    ([0, 2], [1, 3], -1),
    ([0, 3], [1, 2], 1),
    ([1, 2], [0, 3], 1),
    ([1, 3], [0, 2], -1),
    ([2, 3], [0, 1], 1),
];

/// A generalized Lotka-Volterra foliation datum: the degree d and the four
/// cofactors Q_k (each zero or homogeneous of degree d-1 in x0..x3).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LVSpec {
    degree: usize,
    q: [MPoly; 4],
}

impl LVSpec {
    pub fn new(degree: usize, q: [MPoly; 4]) -> Result<Self> {
        if degree < 2 {
            return Err(Error::domain("foliation degree must be at least 2"));
        }
        for (k, qk) in q.iter().enumerate() {
            if qk.nvars() != 4 {
                return Err(Error::dim(format!(
                    "cofactor Q{k} must be a polynomial in x0..x3"
                )));
            }
            if qk.is_zero() {
                continue;
            }
            match qk.homogeneity()? {
                Some(h) if h == (degree - 1) as u64 => {}
                Some(h) => {
                    return Err(Error::domain(format!(
                        "cofactor Q{k} is homogeneous of degree {h}, expected {}",
                        degree - 1
                    )));
                }
                None => {
                    return Err(Error::domain(format!("cofactor Q{k} is not homogeneous")));
                }
            }
        }
        if q.iter().skip(1).all(|qk| *qk == q[0]) {
            return Err(Error::domain(
                "all cofactors are equal: the induced 2-form vanishes identically",
            ));
        }
        Ok(LVSpec { degree, q })
    }

    /// Reconstruct from the antisymmetric matrix P_ij = Q_i - Q_j, given as
    /// the six entries (P01, P02, P03, P12, P13, P23). The entries must
    /// satisfy the cocycle identity P_ij + P_jk = P_ik; the cofactors are
    /// normalized by the gauge choice Q_0 = 0.
    pub fn from_p_matrix(degree: usize, p: &[MPoly; 6]) -> Result<Self> {
        for (a, b, c) in [(0, 3, 1), (0, 4, 2), (1, 5, 2), (3, 5, 4)] {
            // P0j + Pjk = P0k and P12 + P23 = P13 in the flat indexing.
            if &(&p[a] + &p[b]) != &p[c] {
                return Err(Error::domain(
                    "P matrix violates the cocycle identity P_ij + P_jk = P_ik",
                ));
            }
        }
        let q0 = MPoly::zero(4);
        let spec = LVSpec::new(
            degree,
            [q0.clone(), -&p[0], -&p[1], -&p[2]],
        )?;
        for (flat, (i, j)) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .into_iter()
            .enumerate()
        {
            debug_assert_eq!(spec.p(i, j), p[flat]);
        }
        Ok(spec)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn q(&self, k: usize) -> &MPoly {
        &self.q[k]
    }

    /// P_ij = Q_i - Q_j.
    pub fn p(&self, i: usize, j: usize) -> MPoly {
        &self.q[i] - &self.q[j]
    }

    /// The inducing vector field X = sum x_k Q_k d/dx_k on C^4.
    pub fn vector_field(&self) -> PVField {
        let components: Vec<MPoly> = (0..4)
            .map(|k| &MPoly::var(4, k) * &self.q[k])
            .collect();
        PVField::new(components).expect("four components in four variables")
    }
}

/// The Lotka-Volterra 2-form: sign s and complementary pair (k,l) per
/// component pair (i,j), with coefficient s * x_k * x_l * P_kl on dx_i^dx_j.
pub fn build_lv_form(spec: &LVSpec) -> PForm {
    let mut eta = PForm::zero(4, 2);
    for ([i, j], [k, l], s) in LV_PAIRS {
        let mono = Monomial::var(k).mul(&Monomial::var(l));
        let coeff = spec
            .p(k, l)
            .mul_monomial(&mono, &FieldElem::from_int(s as i64));
        eta.add_term(&[i, j], coeff);
    }
    eta
}

/// An affine vector field on C^3 with decoupled quadratic components
/// w_k' = w_k (a_k w_k + b_k), a_k nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineDecoupledVF {
    a: [FieldElem; 3],
    b: [FieldElem; 3],
}

impl AffineDecoupledVF {
    pub fn new(a: [FieldElem; 3], b: [FieldElem; 3]) -> Result<Self> {
        for (k, ak) in a.iter().enumerate() {
            if ak.is_zero() {
                return Err(Error::domain(format!(
                    "leading coefficient a{} must be nonzero",
                    k + 1
                )));
            }
        }
        Ok(AffineDecoupledVF { a, b })
    }

    /// Recognize the decoupled shape in a general field on C^3, rejecting
    /// any component that is not w_k (a_k w_k + b_k).
    pub fn from_field(field: &PVField) -> Result<Self> {
        if field.nvars() != 3 {
            return Err(Error::dim("decoupled systems live on C^3 (variables w1, w2, w3)"));
        }
        let vars = VarSet::w();
        let mut a = [FieldElem::zero(), FieldElem::zero(), FieldElem::zero()];
        let mut b = a.clone();
        for k in 0..3 {
            let comp = field.component(k);
            let quad = Monomial::var_pow(k, 2);
            let lin = Monomial::var(k);
            for (m, _) in comp.terms() {
                if *m != quad && *m != lin {
                    return Err(Error::domain(format!(
                        "component X{} is not decoupled: unexpected monomial {} (expected w{}*(a*w{} + b))",
                        k + 1,
                        MPoly::from_terms(3, &[]).format(&vars).replace("0", &format_monomial_w(m)),
                        k + 1,
                        k + 1
                    )));
                }
            }
            a[k] = comp.coeff(&quad);
            b[k] = comp.coeff(&lin);
        }
        AffineDecoupledVF::new(a, b)
    }

    pub fn a(&self, k: usize) -> &FieldElem {
        &self.a[k]
    }

    pub fn b(&self, k: usize) -> &FieldElem {
        &self.b[k]
    }

    /// The field as polynomial components on C^3.
    pub fn to_field(&self) -> PVField {
        let components: Vec<MPoly> = (0..3)
            .map(|k| {
                let mut p = MPoly::zero(3);
                p.add_term(Monomial::var_pow(k, 2), self.a[k].clone());
                p.add_term(Monomial::var(k), self.b[k].clone());
                p
            })
            .collect();
        PVField::new(components).expect("three components in three variables")
    }
}

fn format_monomial_w(m: &Monomial) -> String {
    let vars = VarSet::w();
    let mut p = MPoly::zero(3);
    p.add_term(*m, FieldElem::one());
    p.format(&vars)
}

/// Homogenize an affine decoupled system to a degree-2 Lotka-Volterra datum
/// on P^3 in the chart w_k = x_k / x_0: Q_0 = 0, Q_k = a_k x_k + b_k x_0.
pub fn homogenize_decoupled(vf: &AffineDecoupledVF) -> LVSpec {
    let q0 = MPoly::zero(4);
    let qk = |k: usize| {
        let mut p = MPoly::zero(4);
        p.add_term(Monomial::var(k + 1), vf.a[k].clone());
        p.add_term(Monomial::var(0), vf.b[k].clone());
        p
    };
    LVSpec::new(2, [q0, qk(0), qk(1), qk(2)]).expect("homogenization of a valid decoupled system")
}

/// One singular point of a decoupled system, with the diagonal Jacobian
/// spectrum in coordinate order (d/dw1, d/dw2, d/dw3).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SingularPoint {
    pub label: String,
    pub coords: [FieldElem; 3],
    pub eigenvalues: [FieldElem; 3],
    pub nondegenerate: bool,
    pub distinct: bool,
}

/// Enumerate the 2^3 singular points of a decoupled system: each coordinate
/// independently sits at 0 (eigenvalue b_k) or at -b_k/a_k (eigenvalue
/// -b_k). Labels are s0..s7 with bit k-1 set when w_k takes the nonzero
/// root. Returns degeneracy warnings when roots collide (some b_k = 0).
pub fn singular_points_decoupled(
    vf: &AffineDecoupledVF,
) -> (Vec<SingularPoint>, Vec<String>) {
    let mut warnings = Vec::new();
    for k in 0..3 {
        if vf.b[k].is_zero() {
            warnings.push(format!(
                "b{} = 0: the two roots of component {} coincide at 0, the eight points degenerate",
                k + 1,
                k + 1
            ));
        }
    }
    let roots: Vec<FieldElem> = (0..3)
        .map(|k| {
            (-&vf.b[k])
                .checked_div(&vf.a[k])
                .expect("a_k nonzero by construction")
        })
        .collect();
    let mut points = Vec::with_capacity(8);
    for mask in 0..8usize {
        let mut coords = [FieldElem::zero(), FieldElem::zero(), FieldElem::zero()];
        let mut eigenvalues = coords.clone();
        for k in 0..3 {
            if mask & (1 << k) != 0 {
                coords[k] = roots[k].clone();
                eigenvalues[k] = -&vf.b[k];
            } else {
                eigenvalues[k] = vf.b[k].clone();
            }
        }
        let nondegenerate = eigenvalues.iter().all(|e| !e.is_zero());
        let distinct = eigenvalues[0] != eigenvalues[1]
            && eigenvalues[0] != eigenvalues[2]
            && eigenvalues[1] != eigenvalues[2];
        points.push(SingularPoint {
            label: format!("s{mask}"),
            coords,
            eigenvalues,
            nondegenerate,
            distinct,
        });
    }
    (points, warnings)
}

/// How the spectrum in a [`SingularityReport`] was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EigenvalueSource {
    /// Read off the diagonal of a triangular Jacobian.
    Triangular,
    /// Supplied candidates certified through the characteristic polynomial.
    Certified,
    /// Not computed (general Jacobian, no candidates supplied).
    Unavailable,
}

/// Exact certification of one singular point of a polynomial vector field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SingularityReport {
    pub is_singular: bool,
    pub jacobian: Vec<Vec<FieldElem>>,
    pub eigenvalues: Option<Vec<FieldElem>>,
    pub eigenvalue_source: EigenvalueSource,
    pub det: FieldElem,
    pub nondegenerate: bool,
    pub distinct: Option<bool>,
}

/// Evaluate the field and its Jacobian at `point`. Eigenvalues are reported
/// exactly when the Jacobian is triangular; otherwise `candidates` (one per
/// dimension, pairwise distinct) are certified as the full spectrum through
/// the characteristic polynomial. No approximation is ever used.
pub fn verify_singularity(
    field: &PVField,
    point: &[FieldElem],
    candidates: Option<&[FieldElem]>,
) -> Result<SingularityReport> {
    let n = field.nvars();
    if point.len() != n {
        return Err(Error::dim(format!(
            "point has {} coordinates, the field lives on C^{n}",
            point.len()
        )));
    }
    let mut is_singular = true;
    for k in 0..n {
        if !field.component(k).eval(point)?.is_zero() {
            is_singular = false;
        }
    }
    let mut jacobian = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(field.component(i).partial_derivative(j).eval(point)?);
        }
        jacobian.push(row);
    }
    let det = determinant(&jacobian);
    let lower = (0..n).all(|i| ((i + 1)..n).all(|j| jacobian[i][j].is_zero()));
    let upper = (0..n).all(|i| (0..i).all(|j| jacobian[i][j].is_zero()));
    let (eigenvalues, eigenvalue_source) = if lower || upper {
        let diag: Vec<FieldElem> = (0..n).map(|i| jacobian[i][i].clone()).collect();
        (Some(diag), EigenvalueSource::Triangular)
    } else if let Some(cands) = candidates {
        if cands.len() != n {
            return Err(Error::dim(format!(
                "expected {n} candidate eigenvalues, got {}",
                cands.len()
            )));
        }
        for (i, ci) in cands.iter().enumerate() {
            for cj in cands.iter().skip(i + 1) {
                if ci == cj {
                    return Err(Error::domain(
                        "candidate eigenvalues must be pairwise distinct to certify the spectrum",
                    ));
                }
            }
        }
        // n distinct roots of the monic degree-n characteristic polynomial
        // pin the spectrum completely.
        for c in cands {
            let mut shifted = jacobian.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = &row[i] - c;
            }
            if !determinant(&shifted).is_zero() {
                return Err(Error::domain(format!(
                    "candidate eigenvalue {c} does not annihilate the characteristic polynomial"
                )));
            }
        }
        (Some(cands.to_vec()), EigenvalueSource::Certified)
    } else {
        (None, EigenvalueSource::Unavailable)
    };
    let distinct = eigenvalues.as_ref().map(|ev| {
        ev.iter()
            .enumerate()
            .all(|(i, a)| ev.iter().skip(i + 1).all(|b| a != b))
    });
    let nondegenerate = !det.is_zero();
    Ok(SingularityReport {
        is_singular,
        jacobian,
        eigenvalues,
        eigenvalue_source,
        det,
        nondegenerate,
        distinct,
    })
}

fn determinant(m: &[Vec<FieldElem>]) -> FieldElem {
    let n = m.len();
    if n == 0 {
        return FieldElem::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = FieldElem::zero();
    for i in 0..n {
        if m[i][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<FieldElem>> = (0..n)
            .filter(|&r| r != i)
            .map(|r| m[r][1..].to_vec())
            .collect();
        let term = &m[i][0] * &determinant(&minor);
        if i % 2 == 0 {
            acc += &term;
        } else {
            acc += &(-&term);
        }
    }
    acc
}

/// Degree of the foliation defined by a projective 2-form: the common
/// homogeneous degree of the coefficients, after removing any shared
/// monomial factor, minus one. Errors on the zero form, inhomogeneous
/// coefficients, or mixed coefficient degrees.
pub fn foliation_degree(eta: &PForm) -> Result<usize> {
    if eta.is_zero() {
        return Err(Error::domain("the zero form does not define a foliation"));
    }
    let mut common_degree: Option<u64> = None;
    let mut content: Option<Monomial> = None;
    for (_, p) in eta.terms() {
        let h = p
            .homogeneity()?
            .ok_or_else(|| Error::domain("form coefficient is not homogeneous"))?;
        match common_degree {
            None => common_degree = Some(h),
            Some(d) if d == h => {}
            Some(d) => {
                return Err(Error::domain(format!(
                    "form coefficients have mixed degrees {d} and {h}"
                )));
            }
        }
        let (m, _) = p.monomial_content()?;
        content = Some(match content {
            None => m,
            Some(g) => g.gcd(&m),
        });
    }
    let d = common_degree.expect("nonzero form has terms");
    let c = content.expect("nonzero form has terms").degree();
    let reduced = d - c;
    if reduced == 0 {
        return Err(Error::domain(
            "form coefficients are a common monomial: no foliation degree",
        ));
    }
    Ok((reduced - 1) as usize)
}

/// Divide out the common monomial factor of the coefficients of a form.
pub fn remove_monomial_content(eta: &PForm) -> Result<(Monomial, PForm)> {
    if eta.is_zero() {
        return Err(Error::domain("the zero form has no monomial content"));
    }
    let mut content: Option<Monomial> = None;
    for (_, p) in eta.terms() {
        let (m, _) = p.monomial_content()?;
        content = Some(match content {
            None => m,
            Some(g) => g.gcd(&m),
        });
    }
    let g = content.expect("nonzero form has terms");
    let mut out = PForm::zero(eta.nvars(), eta.degree());
    for (idx, p) in eta.terms() {
        out.add_term(idx, p.exact_div_monomial(&g)?);
    }
    Ok((g, out))
}

/// Invariance of the coordinate hyperplanes {x_k = 0} and of the coordinate
/// 2-plane intersections {x_i = x_j = 0} under a vector field on C^4.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvarianceReport {
    pub hyperplanes: [bool; 4],
    pub edges: [([usize; 2], bool); 6],
}

impl InvarianceReport {
    pub fn all_invariant(&self) -> bool {
        self.hyperplanes.iter().all(|&b| b) && self.edges.iter().all(|&(_, b)| b)
    }
}

/// Check invariance by exact ideal membership: {x_k = 0} is invariant when
/// x_k divides X_k, and {x_i = x_j = 0} when X_i and X_j both vanish after
/// substituting x_i = x_j = 0.
pub fn invariance_checks(field: &PVField) -> Result<InvarianceReport> {
    if field.nvars() != 4 {
        return Err(Error::dim("invariance checks run on fields over C^4"));
    }
    let mut hyperplanes = [false; 4];
    for (k, h) in hyperplanes.iter_mut().enumerate() {
        let comp = field.component(k);
        *h = comp.is_zero() || comp.exact_div_monomial(&Monomial::var(k)).is_ok();
    }
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut edges = [([0usize, 0usize], false); 6];
    for (slot, (i, j)) in pairs.into_iter().enumerate() {
        let vanish = |k: usize| -> Result<bool> {
            let images: Vec<MPoly> = (0..4)
                .map(|v| {
                    if v == i || v == j {
                        MPoly::zero(4)
                    } else {
                        MPoly::var(4, v)
                    }
                })
                .collect();
            Ok(field.component(k).substitute(&images)?.is_zero())
        };
        edges[slot] = ([i, j], vanish(i)? && vanish(j)?);
    }
    Ok(InvarianceReport { hyperplanes, edges })
}

/// Parsed content of a foliation input file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LVInput {
    Homogeneous(LVSpec),
    Affine(AffineDecoupledVF),
}

/// Parse a foliation description. Two shapes are accepted, both line based
/// with `#` comments and blank lines ignored:
///
/// homogeneous:            affine (decoupled, degree 2 after homogenizing):
///   d=2                     affine
///   Q0=0                    X1=w1*(w1 + (-i - sqrt2))
///   Q1=x1 + ...             X2=w2*(i*w2 + 4*i)
///   Q2=...                  X3=w3*(w3 + 1)
///   Q3=...
pub fn parse_lv_file(text: &str) -> Result<LVInput> {
    let lines = meaningful_lines(text);
    if lines.is_empty() {
        return Err(Error::parse(1, 1, "empty foliation description"));
    }
    if lines[0].1 == "affine" {
        return parse_affine(&lines[1..]).map(LVInput::Affine);
    }
    parse_homogeneous(&lines).map(LVInput::Homogeneous)
}

fn meaningful_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn split_key_value(lineno: usize, line: &str) -> Result<(String, String, usize)> {
    let (key, value) = line.split_once('=').ok_or_else(|| {
        Error::parse(lineno, 1, format!("expected `key=value`, found `{line}`"))
    })?;
    Ok((key.trim().to_string(), value.trim().to_string(), key.len() + 1))
}

fn reanchor(e: Error, lineno: usize, col_offset: usize) -> Error {
    match e {
        Error::Parse { line: _, col, msg } => Error::parse(lineno, col_offset + col, msg),
        other => other,
    }
}

fn parse_affine(lines: &[(usize, String)]) -> Result<AffineDecoupledVF> {
    let vars = VarSet::w();
    let mut comps: [Option<MPoly>; 3] = [None, None, None];
    for (lineno, line) in lines {
        let (key, value, off) = split_key_value(*lineno, line)?;
        let k = match key.as_str() {
            "X1" => 0,
            "X2" => 1,
            "X3" => 2,
            other => {
                return Err(Error::parse(
                    *lineno,
                    1,
                    format!("unexpected key `{other}` in affine description (expected X1, X2, X3)"),
                ));
            }
        };
        if comps[k].is_some() {
            return Err(Error::parse(*lineno, 1, format!("duplicate key `{key}`")));
        }
        comps[k] = Some(parse_poly(&value, &vars).map_err(|e| reanchor(e, *lineno, off))?);
    }
    let missing: Vec<String> = comps
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(k, _)| format!("X{}", k + 1))
        .collect();
    if !missing.is_empty() {
        return Err(Error::parse(1, 1, format!("missing keys: {}", missing.join(", "))));
    }
    let field = PVField::new(comps.into_iter().map(Option::unwrap).collect())
        .expect("three components in three variables");
    AffineDecoupledVF::from_field(&field)
}

fn parse_homogeneous(lines: &[(usize, String)]) -> Result<LVSpec> {
    let vars = VarSet::x(4);
    let mut degree: Option<usize> = None;
    let mut q: [Option<MPoly>; 4] = [None, None, None, None];
    for (lineno, line) in lines {
        let (key, value, off) = split_key_value(*lineno, line)?;
        match key.as_str() {
            "d" => {
                if degree.is_some() {
                    return Err(Error::parse(*lineno, 1, "duplicate key `d`"));
                }
                let d: usize = value.parse().map_err(|_| {
                    Error::parse(*lineno, off + 1, format!("invalid degree `{value}`"))
                })?;
                degree = Some(d);
            }
            "Q0" | "Q1" | "Q2" | "Q3" => {
                let k = key[1..].parse::<usize>().expect("digit suffix");
                if q[k].is_some() {
                    return Err(Error::parse(*lineno, 1, format!("duplicate key `{key}`")));
                }
                q[k] = Some(parse_poly(&value, &vars).map_err(|e| reanchor(e, *lineno, off))?);
            }
            other => {
                return Err(Error::parse(
                    *lineno,
                    1,
                    format!("unexpected key `{other}` (expected d, Q0, Q1, Q2, Q3)"),
                ));
            }
        }
    }
    let degree =
        degree.ok_or_else(|| Error::parse(1, 1, "missing key `d` in foliation description"))?;
    let missing: Vec<String> = q
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(k, _)| format!("Q{k}"))
        .collect();
    if !missing.is_empty() {
        return Err(Error::parse(1, 1, format!("missing keys: {}", missing.join(", "))));
    }
    let [q0, q1, q2, q3] = q;
    LVSpec::new(
        degree,
        [q0.unwrap(), q1.unwrap(), q2.unwrap(), q3.unwrap()],
    )
}

/// Parse a points file: one point per line, three comma-separated scalar
/// expressions (affine coordinates w1, w2, w3).
pub fn parse_points_file(text: &str) -> Result<Vec<[FieldElem; 3]>> {
    let mut points = Vec::new();
    for (lineno, line) in meaningful_lines(text) {
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::parse(
                lineno,
                1,
                format!("expected three comma-separated coordinates, found {}", parts.len()),
            ));
        }
        let mut coords = [FieldElem::zero(), FieldElem::zero(), FieldElem::zero()];
        let mut offset = 0usize;
        for (k, part) in parts.iter().enumerate() {
            coords[k] = crate::mpoly::parse_scalar(part).map_err(|e| reanchor(e, lineno, offset))?;
            offset += part.len() + 1;
        }
        points.push(coords);
    }
    Ok(points)
}

/// Render the eight enumerated points as stable text (one line per point).
pub fn format_points(points: &[SingularPoint]) -> String {
    let mut out = String::new();
    for p in points {
        let coords = p.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let eigs = p.eigenvalues.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let _ = writeln!(
            out,
            "{}: coords = ({}); eigenvalues = ({}); nondegenerate = {}; distinct = {}",
            p.label,
            coords.join(", "),
            eigs.join(", "),
            p.nondegenerate,
            p.distinct
        );
    }
    out
}

/// The running example: w1' = w1(w1 + (-i - sqrt2)), w2' = w2(i w2 + 4i),
/// w3' = w3(w3 + 1).
pub fn example_affine_system() -> AffineDecoupledVF {
    let i = FieldElem::i();
    let s = FieldElem::sqrt2();
    AffineDecoupledVF::new(
        [FieldElem::one(), i.clone(), FieldElem::one()],
        [-&(&i + &s), &FieldElem::from_int(4) * &i, FieldElem::one()],
    )
    .expect("leading coefficients are nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::descent_checks;
    use crate::qfield::rat;

    fn x(k: usize) -> MPoly {
        MPoly::var(4, k)
    }

    #[test]
    fn lv_form_matches_contraction_oracle() {
        // Q = (0, x0, 0, 0), d = 2: compare the closed form against
        // i_R i_X vol computed from first principles.
        let spec = LVSpec::new(2, [MPoly::zero(4), x(0), MPoly::zero(4), MPoly::zero(4)]).unwrap();
        let eta = build_lv_form(&spec);
        let oracle = form_from_vector_field(&spec.vector_field()).unwrap();
        assert_eq!(eta, oracle);
        assert!(!eta.is_zero());
        // And on the running example.
        let spec = homogenize_decoupled(&example_affine_system());
        let eta = build_lv_form(&spec);
        let oracle = form_from_vector_field(&spec.vector_field()).unwrap();
        assert_eq!(eta, oracle);
    }

    #[test]
    fn lv_form_passes_descent_checks() {
        let spec = homogenize_decoupled(&example_affine_system());
        let eta = build_lv_form(&spec);
        let report = descent_checks(&eta).unwrap();
        assert!(report.radial && report.decomposable);
        assert_eq!(foliation_degree(&eta).unwrap(), 2);
    }

    #[test]
    fn homogenization_restricts_back_to_the_affine_field() {
        // Chart-restriction oracle: substituting x0 = 1 into X~ and removing
        // w_k times the zeroth component reproduces the affine system.
        let vf = example_affine_system();
        let spec = homogenize_decoupled(&vf);
        let field = spec.vector_field();
        let chart: Vec<MPoly> = vec![
            MPoly::one(3),
            MPoly::var(3, 0),
            MPoly::var(3, 1),
            MPoly::var(3, 2),
        ];
        let x0_comp = field.component(0).substitute(&chart).unwrap();
        let affine = vf.to_field();
        for k in 0..3 {
            let restricted = field.component(k + 1).substitute(&chart).unwrap();
            let corrected = &restricted - &(&MPoly::var(3, k) * &x0_comp);
            assert_eq!(&corrected, affine.component(k));
        }
    }

    #[test]
    fn homogenization_of_the_running_example() {
        let spec = homogenize_decoupled(&example_affine_system());
        assert_eq!(spec.degree(), 2);
        assert!(spec.q(0).is_zero());
        let vars = VarSet::x(4);
        assert_eq!(spec.q(1).format(&vars), "(-i - sqrt2)*x0 + x1");
        assert_eq!(spec.q(2).format(&vars), "4*i*x0 + i*x2");
        assert_eq!(spec.q(3).format(&vars), "x0 + x3");
    }

    #[test]
    fn spec_validation_rejects_bad_cofactors() {
        // Inhomogeneous cofactor.
        let bad = LVSpec::new(2, [MPoly::zero(4), &x(1) + &MPoly::one(4), MPoly::zero(4), x(0)]);
        assert!(bad.is_err());
        // Wrong degree.
        let bad = LVSpec::new(3, [MPoly::zero(4), x(1), MPoly::zero(4), x(0)]);
        assert!(bad.is_err());
        // All equal: form vanishes.
        let bad = LVSpec::new(2, [x(0).clone(), x(0).clone(), x(0).clone(), x(0)]);
        assert!(bad.is_err());
        // Degree zero is rejected.
        assert!(LVSpec::new(0, [MPoly::zero(4), x(1), MPoly::zero(4), x(0)]).is_err());
    }

    #[test]
    fn p_matrix_round_trip_and_cocycle() {
        let spec = homogenize_decoupled(&example_affine_system());
        let p: [MPoly; 6] = [
            spec.p(0, 1),
            spec.p(0, 2),
            spec.p(0, 3),
            spec.p(1, 2),
            spec.p(1, 3),
            spec.p(2, 3),
        ];
        let rebuilt = LVSpec::from_p_matrix(2, &p).unwrap();
        // The gauge Q0 = 0 is the one the example already uses.
        assert_eq!(rebuilt, spec);
        // Breaking one entry breaks the cocycle.
        let mut broken = p.clone();
        broken[3] = &broken[3] + &x(0);
        assert!(LVSpec::from_p_matrix(2, &broken).is_err());
    }

    #[test]
    fn singular_points_of_the_running_example() {
        let vf = example_affine_system();
        let (points, warnings) = singular_points_decoupled(&vf);
        assert_eq!(points.len(), 8);
        assert!(warnings.is_empty());
        let by_label = |l: &str| points.iter().find(|p| p.label == l).unwrap();
        // s0 is the origin with eigenvalues (b1, b2, b3).
        let s0 = by_label("s0");
        assert!(s0.coords.iter().all(|c| c.is_zero()));
        assert_eq!(
            s0.eigenvalues,
            [
                FieldElem::new(rat(0), rat(-1), rat(-1), rat(0)),
                FieldElem::new(rat(0), rat(4), rat(0), rat(0)),
                FieldElem::one(),
            ]
        );
        // s2 = (0, -4, 0): the w2 eigenvalue flips sign.
        let s2 = by_label("s2");
        assert_eq!(s2.coords[1], FieldElem::from_int(-4));
        assert_eq!(s2.eigenvalues[1], FieldElem::new(rat(0), rat(-4), rat(0), rat(0)));
        // s7 has all coordinates at the nonzero root.
        let s7 = by_label("s7");
        assert_eq!(s7.coords[0], &FieldElem::i() + &FieldElem::sqrt2());
        assert_eq!(s7.coords[1], FieldElem::from_int(-4));
        assert_eq!(s7.coords[2], FieldElem::from_int(-1));
        assert!(points.iter().all(|p| p.nondegenerate && p.distinct));
    }

    #[test]
    fn degenerate_roots_produce_warnings() {
        let vf = AffineDecoupledVF::new(
            [FieldElem::one(), FieldElem::one(), FieldElem::one()],
            [FieldElem::zero(), FieldElem::one(), FieldElem::one()],
        )
        .unwrap();
        let (points, warnings) = singular_points_decoupled(&vf);
        assert_eq!(warnings.len(), 1);
        assert!(points.iter().any(|p| !p.nondegenerate));
    }

    #[test]
    fn verify_singularity_on_diagonal_and_dense_jacobians() {
        let vf = example_affine_system();
        let field = vf.to_field();
        let origin = [FieldElem::zero(), FieldElem::zero(), FieldElem::zero()];
        let report = verify_singularity(&field, &origin, None).unwrap();
        assert!(report.is_singular);
        assert_eq!(report.eigenvalue_source, EigenvalueSource::Triangular);
        assert_eq!(
            report.det,
            &(&FieldElem::new(rat(0), rat(-1), rat(-1), rat(0))
                * &FieldElem::new(rat(0), rat(4), rat(0), rat(0)))
                * &FieldElem::one()
        );
        assert!(report.nondegenerate);
        assert_eq!(report.distinct, Some(true));
        // A non-singular point is reported as such.
        let ones = [FieldElem::one(), FieldElem::one(), FieldElem::one()];
        let report = verify_singularity(&field, &ones, None).unwrap();
        assert!(!report.is_singular);
        // A dense Jacobian with certified candidates: X = (w2, w1, w3) at 0
        // has spectrum {1, -1, 1}... not distinct, so take X = (w2, 2*w1, w3).
        let dense = PVField::new(vec![
            MPoly::var(3, 1),
            MPoly::var(3, 0).scale(&FieldElem::from_int(2)),
            MPoly::var(3, 2),
        ])
        .unwrap();
        let sqrt2 = FieldElem::sqrt2();
        let cands = [sqrt2.clone(), -&sqrt2, FieldElem::one()];
        let report = verify_singularity(&dense, &origin, Some(&cands)).unwrap();
        assert_eq!(report.eigenvalue_source, EigenvalueSource::Certified);
        assert_eq!(report.distinct, Some(true));
        // Wrong candidates are rejected.
        let bad = [FieldElem::one(), FieldElem::from_int(2), FieldElem::from_int(3)];
        assert!(verify_singularity(&dense, &origin, Some(&bad)).is_err());
    }

    #[test]
    fn degree_and_content_removal() {
        let spec = homogenize_decoupled(&example_affine_system());
        let eta = build_lv_form(&spec);
        // Multiplying by a monomial does not change the foliation degree.
        let fat = eta.mul_poly(&x(0));
        assert_eq!(foliation_degree(&fat).unwrap(), 2);
        let (content, slim) = remove_monomial_content(&fat).unwrap();
        assert_eq!(content, Monomial::var(0));
        assert_eq!(slim, eta);
        assert!(foliation_degree(&PForm::zero(4, 2)).is_err());
    }

    #[test]
    fn invariance_of_coordinate_strata() {
        let spec = homogenize_decoupled(&example_affine_system());
        let report = invariance_checks(&spec.vector_field()).unwrap();
        assert!(report.all_invariant());
        // A field leaking across x0 = 0 fails the first check.
        let leaky = PVField::new(vec![
            MPoly::var(4, 1).pow(2),
            MPoly::zero(4),
            MPoly::zero(4),
            MPoly::zero(4),
        ])
        .unwrap();
        let report = invariance_checks(&leaky).unwrap();
        assert!(!report.hyperplanes[0]);
        assert!(!report.all_invariant());
    }

    #[test]
    fn lv_file_parsing_both_shapes() {
        let affine = "# running example\naffine\nX1=w1*(w1 + (-i - sqrt2))\nX2=w2*(i*w2 + 4*i)\nX3=w3*(w3 + 1)\n";
        match parse_lv_file(affine).unwrap() {
            LVInput::Affine(vf) => assert_eq!(vf, example_affine_system()),
            other => panic!("expected affine input, got {other:?}"),
        }
        let homog = "d=2\nQ0=0\nQ1=x1 + (-i - sqrt2)*x0\nQ2=i*x2 + 4*i*x0\nQ3=x3 + x0\n";
        match parse_lv_file(homog).unwrap() {
            LVInput::Homogeneous(spec) => {
                assert_eq!(spec, homogenize_decoupled(&example_affine_system()));
            }
            other => panic!("expected homogeneous input, got {other:?}"),
        }
    }

    #[test]
    fn lv_file_parsing_rejects_malformed_input() {
        assert!(matches!(parse_lv_file(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_lv_file("d=2\nQ0=0\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_lv_file("d=two\nQ0=0\nQ1=x1\nQ2=x2\nQ3=x3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_lv_file("d=2\nQ0=0\nQ1=x1 +\nQ2=x2\nQ3=x3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_lv_file("affine\nX1=w1*(w1+1)\nX2=w2*(w2+1)\nX4=w3\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        // Well-formed text, mathematically rejected: not decoupled.
        let coupled = "affine\nX1=w1*(w1 + w2)\nX2=w2*(w2 + 1)\nX3=w3*(w3 + 1)\n";
        assert!(matches!(parse_lv_file(coupled), Err(Error::Domain(_))));
        // a_k = 0 is rejected too.
        let linear = "affine\nX1=w1\nX2=w2*(w2 + 1)\nX3=w3*(w3 + 1)\n";
        assert!(matches!(parse_lv_file(linear), Err(Error::Domain(_))));
    }

    #[test]
    fn points_file_parsing() {
        let text = "# two points\n0, 0, 0\ni + sqrt2, -4, -1\n";
        let pts = parse_points_file(text).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1][0], &FieldElem::i() + &FieldElem::sqrt2());
        assert!(parse_points_file("1, 2\n").is_err());
        assert!(matches!(
            parse_points_file("0, 0, $\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
