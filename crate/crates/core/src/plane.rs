//! Exact plane geometry over a field: projective points, general position,
//! and linear systems of curves with prescribed multiplicities at the eight
//! base points.
//!
//! A multiplicity-m condition at a point contributes the evaluation row and
//! all mixed partial-derivative rows of order < m in the two coordinates
//! other than the point's last nonzero one (the Euler relation makes the
//! remaining derivatives redundant, without dividing by the degree, so the
//! rows are valid in every characteristic). Curve *solving* is still
//! refused in characteristics 2 and 3, where ten concurrent exceptional
//! curves are not the relevant bound.

use std::fmt;

use crate::field::Field;
use crate::linalg::{bareiss_det, kernel_basis, Mat};
use crate::picard::ExceptionalClass;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaneError {
    ZeroPoint,
    /// curve solving refused in characteristics 2 and 3
    UnsupportedCharacteristic(u64),
    /// a multiplicity-m point needs more condition rows than the system
    /// has monomial columns
    TooManyConditions { mult: usize, cols: usize },
    /// the linear system has a nullspace of dimension ≥ 2 (the points
    /// violate general position upstream)
    ExcessDimension { dim: usize },
    /// blow-up classes have no plane model
    BlowupClass(ExceptionalClass),
}

impl fmt::Display for PlaneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneError::ZeroPoint => write!(f, "projective point must have a nonzero coordinate"),
            PlaneError::UnsupportedCharacteristic(p) => {
                write!(f, "curve solving is not supported in characteristic {p}")
            }
            PlaneError::TooManyConditions { mult, cols } => write!(
                f,
                "multiplicity {mult} needs more rows than the {cols} monomials"
            ),
            PlaneError::ExcessDimension { dim } => {
                write!(f, "linear system has excess nullspace dimension {dim}")
            }
            PlaneError::BlowupClass(c) => {
                write!(f, "blow-up class {c} has no plane model")
            }
        }
    }
}

impl std::error::Error for PlaneError {}

/// A point of P², normalized so the last nonzero coordinate is 1.
#[derive(Clone, Debug)]
pub struct ProjPoint<F: Field> {
    coords: [F::Elem; 3],
}

impl<F: Field> PartialEq for ProjPoint<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl<F: Field> Eq for ProjPoint<F> {}

impl<F: Field> std::hash::Hash for ProjPoint<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl<F: Field> ProjPoint<F> {
    pub fn new(f: &F, coords: [F::Elem; 3]) -> Result<ProjPoint<F>, PlaneError> {
        let last = (0..3).rev().find(|&i| !f.is_zero(&coords[i]));
        let last = last.ok_or(PlaneError::ZeroPoint)?;
        let inv = f.inv(&coords[last]).expect("nonzero coordinate");
        let norm = [
            f.mul(&coords[0], &inv),
            f.mul(&coords[1], &inv),
            f.mul(&coords[2], &inv),
        ];
        Ok(ProjPoint { coords: norm })
    }

    pub fn from_i64(f: &F, coords: [i64; 3]) -> ProjPoint<F> {
        ProjPoint::new(
            f,
            [
                f.from_i64(coords[0]),
                f.from_i64(coords[1]),
                f.from_i64(coords[2]),
            ],
        )
        .expect("nonzero point")
    }

    pub fn coords(&self) -> &[F::Elem; 3] {
        &self.coords
    }

    /// Index of the last nonzero coordinate (equal to 1 after
    /// normalization).
    pub fn last_nonzero(&self, f: &F) -> usize {
        (0..3)
            .rev()
            .find(|&i| !f.is_zero(&self.coords[i]))
            .expect("normalized point")
    }

    pub fn display(&self, f: &F) -> String {
        format!(
            "({}:{}:{})",
            f.fmt_elem(&self.coords[0]),
            f.fmt_elem(&self.coords[1]),
            f.fmt_elem(&self.coords[2])
        )
    }
}

/// Which parameterized point template a configuration instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetupTag {
    A,
    B,
}

impl fmt::Display for SetupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetupTag::A => write!(f, "A"),
            SetupTag::B => write!(f, "B"),
        }
    }
}

/// Eight base points plus the target concurrency point P.
#[derive(Clone, Debug)]
pub struct PointConfig<F: Field> {
    pub field: F,
    pub tag: Option<SetupTag>,
    pub params: Vec<F::Elem>,
    pub points: Vec<ProjPoint<F>>,
    pub target: ProjPoint<F>,
}

impl<F: Field> PointConfig<F> {
    /// Point set-up A: the four lines through {P1,P2}, {P3,P4}, {P5,P6},
    /// {P7,P8} all pass through P = (0:0:1).
    pub fn setup_a(field: F, params: [F::Elem; 6]) -> PointConfig<F> {
        let [a, b, c, d, e, ff] = params.clone();
        let one = field.one();
        let zero = field.zero();
        let pt = |x: &F::Elem, y: &F::Elem, z: &F::Elem| {
            ProjPoint::new(&field, [x.clone(), y.clone(), z.clone()]).expect("template point")
        };
        let points = vec![
            pt(&zero, &one, &one),
            pt(&zero, &one, &a),
            pt(&one, &zero, &one),
            pt(&one, &zero, &b),
            pt(&one, &one, &one),
            pt(&one, &one, &c),
            pt(&d, &one, &e),
            pt(&d, &one, &ff),
        ];
        let target = pt(&zero, &zero, &one);
        PointConfig {
            field,
            tag: Some(SetupTag::A),
            params: params.to_vec(),
            points,
            target,
        }
    }

    /// Point set-up B: only the lines through {P1,P2} and {P3,P4} pass
    /// through P.
    pub fn setup_b(field: F, params: [F::Elem; 8]) -> PointConfig<F> {
        let [a, b, c, d, e, ff, g, h] = params.clone();
        let one = field.one();
        let zero = field.zero();
        let pt = |x: &F::Elem, y: &F::Elem, z: &F::Elem| {
            ProjPoint::new(&field, [x.clone(), y.clone(), z.clone()]).expect("template point")
        };
        let points = vec![
            pt(&zero, &one, &one),
            pt(&zero, &one, &a),
            pt(&one, &zero, &one),
            pt(&one, &zero, &b),
            pt(&one, &one, &one),
            pt(&one, &c, &d),
            pt(&one, &e, &ff),
            pt(&one, &g, &h),
        ];
        let target = pt(&zero, &zero, &one);
        PointConfig {
            field,
            tag: Some(SetupTag::B),
            params: params.to_vec(),
            points,
            target,
        }
    }

    pub fn from_points(
        field: F,
        points: Vec<ProjPoint<F>>,
        target: ProjPoint<F>,
    ) -> PointConfig<F> {
        assert_eq!(points.len(), 8);
        PointConfig {
            field,
            tag: None,
            params: Vec::new(),
            points,
            target,
        }
    }
}

/// The first violated general-position condition, as a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GpViolation {
    /// 0-based indices of coincident points
    Coincident(usize, usize),
    Collinear(usize, usize, usize),
    ConicThroughSix([usize; 6]),
    /// a cubic through all eight points singular at this point
    SingularCubic { singular_at: usize },
}

impl fmt::Display for GpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |i: &usize| i + 1;
        match self {
            GpViolation::Coincident(i, j) => {
                write!(f, "coincident points P{} = P{}", one_based(i), one_based(j))
            }
            GpViolation::Collinear(i, j, k) => write!(
                f,
                "collinear points P{}, P{}, P{}",
                one_based(i),
                one_based(j),
                one_based(k)
            ),
            GpViolation::ConicThroughSix(s) => {
                write!(f, "conic through P{:?}", s.map(|i| i + 1))
            }
            GpViolation::SingularCubic { singular_at } => write!(
                f,
                "cubic through all eight points singular at P{}",
                one_based(singular_at)
            ),
        }
    }
}

/// Degree-n monomials in x, y, z, in decreasing lexicographic order of the
/// exponent triple.
pub fn monomials(degree: usize) -> Vec<[u8; 3]> {
    let n = degree as i64;
    let mut out = Vec::new();
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            out.push([i as u8, j as u8, (n - i - j) as u8]);
        }
    }
    out
}

pub fn num_monomials(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

fn falling(f: &impl Field, e: u8, k: u8) -> Option<i64> {
    if k > e {
        return None;
    }
    let _ = f;
    let mut acc = 1i64;
    for t in 0..k {
        acc *= (e - t) as i64;
    }
    Some(acc)
}

fn pow<F: Field>(f: &F, x: &F::Elem, e: u8) -> F::Elem {
    let mut acc = f.one();
    for _ in 0..e {
        acc = f.mul(&acc, x);
    }
    acc
}

/// The row of `∂^ord` applied to each degree-n monomial, evaluated at the
/// point; `ord` gives the derivative order per variable.
fn derivative_row<F: Field>(
    f: &F,
    degree: usize,
    point: &ProjPoint<F>,
    ord: [u8; 3],
) -> Vec<F::Elem> {
    let coords = point.coords();
    monomials(degree)
        .iter()
        .map(|e| {
            let mut acc = f.one();
            for v in 0..3 {
                match falling(f, e[v], ord[v]) {
                    None => return f.zero(),
                    Some(c) => {
                        acc = f.mul(&acc, &f.from_i64(c));
                        acc = f.mul(&acc, &pow(f, &coords[v], e[v] - ord[v]));
                    }
                }
            }
            acc
        })
        .collect()
}

/// Condition rows for "multiplicity ≥ mult at point" on degree-n curves:
/// all derivative orders `< mult` in the two coordinates other than the
/// point's last nonzero one.
pub fn condition_rows<F: Field>(
    f: &F,
    degree: usize,
    point: &ProjPoint<F>,
    mult: usize,
) -> Vec<Vec<F::Elem>> {
    let t = point.last_nonzero(f);
    let uv: Vec<usize> = (0..3).filter(|&v| v != t).collect();
    let mut rows = Vec::new();
    for total in 0..mult {
        for du in (0..=total).rev() {
            let dv = total - du;
            let mut ord = [0u8; 3];
            ord[uv[0]] = du as u8;
            ord[uv[1]] = dv as u8;
            rows.push(derivative_row(f, degree, point, ord));
        }
    }
    rows
}

/// The full condition matrix for a degree-n linear system: one block per
/// (point, multiplicity), plus an optional evaluation row at an extra
/// point.
pub fn condition_matrix<F: Field>(
    f: &F,
    degree: usize,
    conditions: &[(&ProjPoint<F>, usize)],
    extra_point: Option<&ProjPoint<F>>,
) -> Result<Mat<F::Elem>, PlaneError> {
    let cols = num_monomials(degree);
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for &(point, mult) in conditions {
        if mult * (mult + 1) / 2 > cols {
            return Err(PlaneError::TooManyConditions { mult, cols });
        }
        rows.extend(condition_rows(f, degree, point, mult));
    }
    if let Some(p) = extra_point {
        rows.push(derivative_row(f, degree, p, [0, 0, 0]));
    }
    Ok(Mat::from_rows(rows))
}

/// Checks the general-position conditions in a fixed deterministic order
/// and returns the first violation.
pub fn general_position<F: Field>(
    f: &F,
    points: &[ProjPoint<F>],
) -> Result<(), GpViolation> {
    assert_eq!(points.len(), 8);
    for i in 0..8 {
        for j in i + 1..8 {
            if points[i] == points[j] {
                return Err(GpViolation::Coincident(i, j));
            }
        }
    }
    for i in 0..8 {
        for j in i + 1..8 {
            for k in j + 1..8 {
                let m = condition_matrix(
                    f,
                    1,
                    &[(&points[i], 1), (&points[j], 1), (&points[k], 1)],
                    None,
                )
                .expect("3x3");
                if f.is_zero(&bareiss_det(f, &m)) {
                    return Err(GpViolation::Collinear(i, j, k));
                }
            }
        }
    }
    // six points on a conic: complement pairs in lexicographic order
    for a in 0..8 {
        for b in a + 1..8 {
            let six: Vec<usize> = (0..8).filter(|&i| i != a && i != b).collect();
            let conds: Vec<(&ProjPoint<F>, usize)> = six.iter().map(|&i| (&points[i], 1)).collect();
            let m = condition_matrix(f, 2, &conds, None).expect("6x6");
            if f.is_zero(&bareiss_det(f, &m)) {
                let mut w = [0usize; 6];
                w.copy_from_slice(&six);
                return Err(GpViolation::ConicThroughSix(w));
            }
        }
    }
    // a cubic through all eight singular at one of them
    for j in 0..8 {
        let conds: Vec<(&ProjPoint<F>, usize)> = (0..8)
            .map(|i| (&points[i], if i == j { 2 } else { 1 }))
            .collect();
        let m = condition_matrix(f, 3, &conds, None).expect("10x10");
        if f.is_zero(&bareiss_det(f, &m)) {
            return Err(GpViolation::SingularCubic { singular_at: j });
        }
    }
    Ok(())
}

/// A plane curve of degree n as a coefficient vector over the degree-n
/// monomials.
#[derive(Clone, Debug)]
pub struct PlaneCurve<F: Field> {
    pub degree: usize,
    pub coeffs: Vec<F::Elem>,
}

impl<F: Field> PlaneCurve<F> {
    pub fn evaluate(&self, f: &F, p: &ProjPoint<F>) -> F::Elem {
        let coords = p.coords();
        let mut acc = f.zero();
        for (c, e) in self.coeffs.iter().zip(monomials(self.degree)) {
            if f.is_zero(c) {
                continue;
            }
            let mut term = c.clone();
            for v in 0..3 {
                term = f.mul(&term, &pow(f, &coords[v], e[v]));
            }
            acc = f.add(&acc, &term);
        }
        acc
    }

    pub fn passes_through(&self, f: &F, p: &ProjPoint<F>) -> bool {
        f.is_zero(&self.evaluate(f, p))
    }

    pub fn display(&self, f: &F) -> String {
        let vars = ["x", "y", "z"];
        let mut terms = Vec::new();
        for (c, e) in self.coeffs.iter().zip(monomials(self.degree)) {
            if f.is_zero(c) {
                continue;
            }
            let mut s = f.fmt_elem(c);
            for v in 0..3 {
                match e[v] {
                    0 => {}
                    1 => s.push_str(&format!("*{}", vars[v])),
                    k => s.push_str(&format!("*{}^{}", vars[v], k)),
                }
            }
            terms.push(s);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn check_characteristic<F: Field>(f: &F) -> Result<(), PlaneError> {
    let p = f.characteristic();
    if p == 2 || p == 3 {
        Err(PlaneError::UnsupportedCharacteristic(p))
    } else {
        Ok(())
    }
}

/// The member of the class's linear system through the configuration's
/// eight points with the prescribed multiplicities: `None` when the system
/// has no nonzero solution, the unique curve when the nullspace is a line,
/// an error when the nullspace is larger (general position fails upstream).
pub fn curve_for_class<F: Field>(
    config: &PointConfig<F>,
    class: &ExceptionalClass,
) -> Result<Option<PlaneCurve<F>>, PlaneError> {
    if class.is_blowup() {
        return Err(PlaneError::BlowupClass(*class));
    }
    check_characteristic(&config.field)?;
    let f = &config.field;
    let degree = class.degree() as usize;
    let conds: Vec<(&ProjPoint<F>, usize)> = (0..8)
        .filter(|&i| class.mult(i) > 0)
        .map(|i| (&config.points[i], class.mult(i) as usize))
        .collect();
    let m = condition_matrix(f, degree, &conds, None)?;
    let kernel = kernel_basis(f, &m);
    match kernel.len() {
        0 => Ok(None),
        1 => Ok(Some(PlaneCurve {
            degree,
            coeffs: kernel.into_iter().next().unwrap(),
        })),
        dim => Err(PlaneError::ExcessDimension { dim }),
    }
}

/// Number of clique members whose plane curve exists and passes through
/// the target point. Cliques containing blow-up classes are rejected.
pub fn concurrent_count<F: Field>(
    config: &PointConfig<F>,
    classes: &[ExceptionalClass],
) -> Result<usize, PlaneError> {
    if let Some(c) = classes.iter().find(|c| c.is_blowup()) {
        return Err(PlaneError::BlowupClass(*c));
    }
    let mut count = 0;
    for class in classes {
        if let Some(curve) = curve_for_class(config, class)? {
            if curve.passes_through(&config.field, &config.target) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Domain, PrimeField, Rationals, XorShift};

    fn q() -> Rationals {
        Rationals
    }

    fn setup_a_q(params: [i64; 6]) -> PointConfig<Rationals> {
        let f = q();
        PointConfig::setup_a(f, params.map(|x| f.from_i64(x)))
    }

    #[test]
    fn monomial_order_matches_conic_convention() {
        // t1 x² + t2 xy + t3 xz + t4 y² + t5 yz + t6 z²
        assert_eq!(
            monomials(2),
            vec![
                [2, 0, 0],
                [1, 1, 0],
                [1, 0, 1],
                [0, 2, 0],
                [0, 1, 1],
                [0, 0, 2]
            ]
        );
        assert_eq!(monomials(1).len(), 3);
        assert_eq!(num_monomials(6), 28);
    }

    #[test]
    fn point_normalization_and_equality() {
        let f = q();
        let p1 = ProjPoint::from_i64(&f, [2, 4, 6]);
        let p2 = ProjPoint::from_i64(&f, [1, 2, 3]);
        assert_eq!(p1, p2);
        let p3 = ProjPoint::from_i64(&f, [3, 1, 0]);
        assert_eq!(p3.last_nonzero(&f), 1);
        assert!(ProjPoint::new(&f, [f.zero(), f.zero(), f.zero()]).is_err());
    }

    #[test]
    fn line_through_two_points() {
        let f = q();
        let m = condition_matrix(
            &f,
            1,
            &[
                (&ProjPoint::from_i64(&f, [0, 1, 1]), 1),
                (&ProjPoint::from_i64(&f, [0, 1, -3]), 1),
            ],
            None,
        )
        .unwrap();
        assert_eq!((m.rows, m.cols), (2, 3));
        assert_eq!(crate::linalg::rank(&f, &m), 2);
    }

    #[test]
    fn too_many_conditions_signals() {
        let f = q();
        let p = ProjPoint::from_i64(&f, [1, 2, 3]);
        let err = condition_matrix(&f, 1, &[(&p, 3)], None).unwrap_err();
        assert_eq!(err, PlaneError::TooManyConditions { mult: 3, cols: 3 });
    }

    #[test]
    fn setup_a_lines_through_target() {
        // the lines x=0 (P1 P2) and x=y (P5 P6) from the set-up templates
        let config = setup_a_q([5, 7, 2, 3, 4, 6]);
        let f = &config.field;
        let l12: ExceptionalClass = "1 1 1 0 0 0 0 0 0".parse().unwrap();
        let curve = curve_for_class(&config, &l12).unwrap().unwrap();
        // x = 0: only the x coefficient is nonzero
        assert!(!f.is_zero(&curve.coeffs[0]));
        assert!(f.is_zero(&curve.coeffs[1]));
        assert!(f.is_zero(&curve.coeffs[2]));
        assert!(curve.passes_through(f, &config.target));

        let l56: ExceptionalClass = "1 0 0 0 0 1 1 0 0".parse().unwrap();
        let curve = curve_for_class(&config, &l56).unwrap().unwrap();
        // x = y
        assert_eq!(curve.coeffs[0], f.neg(&curve.coeffs[1]));
        assert!(f.is_zero(&curve.coeffs[2]));
        assert!(curve.passes_through(f, &config.target));
    }

    #[test]
    fn coincident_points_detected() {
        let config = setup_a_q([1, 7, 2, 3, 4, 6]); // a = 1 makes P2 = P1
        assert_eq!(
            general_position(&config.field, &config.points),
            Err(GpViolation::Coincident(0, 1))
        );
    }

    #[test]
    fn blowup_class_rejected() {
        let config = setup_a_q([5, 7, 2, 3, 4, 6]);
        let e1 = ExceptionalClass::blowup(0);
        assert!(matches!(
            curve_for_class(&config, &e1),
            Err(PlaneError::BlowupClass(_))
        ));
        assert!(matches!(
            concurrent_count(&config, &[e1]),
            Err(PlaneError::BlowupClass(_))
        ));
    }

    #[test]
    fn char_2_and_3_refused_for_curves() {
        let f2 = PrimeField::new(2);
        let config = PointConfig::setup_a(f2, [0, 1, 0, 1, 0, 1].map(|x| f2.from_i64(x)));
        let l12: ExceptionalClass = "1 1 1 0 0 0 0 0 0".parse().unwrap();
        assert!(matches!(
            curve_for_class(&config, &l12),
            Err(PlaneError::UnsupportedCharacteristic(2))
        ));
    }

    #[test]
    fn scaling_points_changes_nothing() {
        let f = q();
        let coords: [[i64; 3]; 8] = [
            [0, 1, 1],
            [0, 1, 5],
            [1, 0, 1],
            [1, 0, 7],
            [1, 1, 1],
            [1, 1, 2],
            [3, 1, 4],
            [3, 1, 6],
        ];
        let pts: Vec<_> = coords
            .iter()
            .map(|c| ProjPoint::from_i64(&f, *c))
            .collect();
        let scaled: Vec<_> = coords
            .iter()
            .map(|c| ProjPoint::from_i64(&f, [c[0] * 12, c[1] * 12, c[2] * 12]))
            .collect();
        assert_eq!(
            general_position(&f, &pts),
            general_position(&f, &scaled)
        );
        assert_eq!(pts, scaled);
    }

    #[test]
    fn general_position_symmetric_under_permutation() {
        let config = setup_a_q([5, 7, 2, 3, 4, 6]);
        let f = &config.field;
        let ok = general_position(f, &config.points).is_ok();
        let mut permuted = config.points.clone();
        permuted.reverse();
        permuted.swap(2, 5);
        assert_eq!(ok, general_position(f, &permuted).is_ok());
    }

    /// Over a prime field (p ∤ degree), the two-derivative reduction and
    /// the evaluation-plus-all-three-partials conditions cut out the same
    /// nullspace.
    #[test]
    fn euler_reduction_matches_full_derivative_conditions() {
        let f = PrimeField::new(101);
        let mut rng = XorShift(0xfeed_5eed);
        let mut tested = 0;
        while tested < 20 {
            let coords = [
                rng.below(f.modulus()),
                rng.below(f.modulus()),
                f.from_i64(1),
            ];
            let p = ProjPoint::new(&f, coords).unwrap();
            for degree in [2usize, 3, 4] {
                let reduced = condition_matrix(&f, degree, &[(&p, 2)], None).unwrap();
                // evaluation plus all three first partials
                let mut rows = vec![derivative_row(&f, degree, &p, [0, 0, 0])];
                for v in 0..3 {
                    let mut ord = [0u8; 3];
                    ord[v] = 1;
                    rows.push(derivative_row(&f, degree, &p, ord));
                }
                let full = Mat::from_rows(rows);
                let kr = kernel_basis(&f, &reduced);
                let kf = kernel_basis(&f, &full);
                assert_eq!(kr.len(), kf.len());
                // same span: each reduced-kernel vector satisfies the full rows
                for v in &kr {
                    for i in 0..full.rows {
                        let mut s = f.zero();
                        for j in 0..full.cols {
                            s = f.add(&s, &f.mul(full.at(i, j), &v[j]));
                        }
                        assert_eq!(s, 0);
                    }
                }
            }
            tested += 1;
        }
    }


}

#[cfg(test)]
mod linear_system_tests {
    use super::*;
    use crate::field::{Domain, PrimeField, XorShift};
    use crate::picard::ClassList;

    /// Uniqueness: over a general-position configuration every class
    /// of degree ≥ 1 has a one-dimensional linear system.
    #[test]
    fn nullspace_dimension_is_one_in_general_position() {
        let f = PrimeField::new(101);
        let mut rng = XorShift(0x0dd_ba11);
        let mut config = None;
        for _ in 0..200 {
            let params = [0; 6].map(|_| rng.below(101));
            let candidate = PointConfig::setup_a(f, params);
            if general_position(&f, &candidate.points).is_ok() {
                config = Some(candidate);
                break;
            }
        }
        let config = config.expect("a general-position tuple over F_101");
        for class in ClassList::get().iter() {
            if class.is_blowup() {
                continue;
            }
            let curve = curve_for_class(&config, class).unwrap();
            assert!(curve.is_some(), "unique curve for {class}");
        }
    }

    /// The four set-up lines pass through the target for every valid
    /// parameter choice.
    #[test]
    fn setup_a_lines_always_concurrent() {
        let f = crate::field::Rationals;
        let config = PointConfig::setup_a(f, [7, 9, 4, 3, 5, 11].map(|x| f.from_i64(x)));
        let lines: Vec<crate::picard::ExceptionalClass> = vec![
            crate::picard::ExceptionalClass::line(0, 1),
            crate::picard::ExceptionalClass::line(2, 3),
            crate::picard::ExceptionalClass::line(4, 5),
            crate::picard::ExceptionalClass::line(6, 7),
        ];
        assert_eq!(concurrent_count(&config, &lines).unwrap(), 4);
    }
}
