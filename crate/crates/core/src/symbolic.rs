//! Exact multivariate polynomial machinery over the rationals, used to
//! derive the concurrency constraint polynomials of the parameterized
//! point set-ups.
//!
//! Polynomials live in ℚ[a..h] (set-up A uses a..f). A concurrency
//! constraint is the determinant of the square condition system (the
//! eight-point conditions plus the evaluation row at P), computed by
//! fraction-free elimination; trial division by the general-position
//! determinants then strips the degenerate factors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{Domain, Field, PrimeField};
use crate::linalg::{bareiss_det, Mat};
use crate::picard::ExceptionalClass;
use crate::plane::{monomials, num_monomials, SetupTag};

/// Number of set-up parameters (variables `a..h`).
pub const NVARS: usize = 8;
pub const VAR_NAMES: [char; NVARS] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'];

pub type Expo = [u8; NVARS];

/// A monomial in the parameters, ordered by total degree with ties broken
/// so that `a < b < … < h`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Expo);

impl Mono {
    pub const ONE: Mono = Mono([0; NVARS]);

    pub fn var(i: usize) -> Mono {
        let mut e = [0u8; NVARS];
        e[i] = 1;
        Mono(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut e = [0u8; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i]
                .checked_add(other.0[i])
                .expect("monomial exponent overflow");
        }
        Mono(e)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        (0..NVARS).all(|i| self.0[i] <= other.0[i])
    }

    pub fn div(&self, other: &Mono) -> Mono {
        let mut e = [0u8; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i] - other.0[i];
        }
        Mono(e)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                for i in (0..NVARS).rev() {
                    match self.0[i].cmp(&other.0[i]) {
                        std::cmp::Ordering::Equal => continue,
                        o => return o,
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over ℚ; zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Mono, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly::default()
    }

    pub fn one() -> MultiPoly {
        MultiPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::ONE, c);
        }
        MultiPoly { terms }
    }

    pub fn from_i64(n: i64) -> MultiPoly {
        MultiPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(i: usize) -> MultiPoly {
        assert!(i < NVARS);
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(i), BigRational::one());
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| *m == Mono::ONE)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u8 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Leading term under the canonical order.
    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.last_key_value()
    }

    fn insert_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division: `Some(q)` with `self = q·d` when `d` divides
    /// exactly, `None` otherwise. The remainder is updated in place.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&dm);
            let qc = &rc / &dc;
            for (m2, c2) in &d.terms {
                rem.insert_term(qm.mul(m2), -(&qc * c2));
            }
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    /// The positive rational `r` such that `self / r` is an integer
    /// polynomial with coprime coefficients.
    pub fn content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num_integer::gcd(num, c.numer().abs());
            den = num_integer::lcm(den, c.denom().clone());
        }
        if num.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(num, den)
        }
    }

    /// Content-free, sign-normalized form (leading coefficient positive):
    /// the canonical representative up to a nonzero rational scalar.
    pub fn primitive(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let mut scale = self.content().recip();
        if self.leading().unwrap().1.is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }

    /// Equality up to a nonzero rational scalar.
    pub fn eq_up_to_scalar(&self, other: &MultiPoly) -> bool {
        self.primitive() == other.primitive()
    }

    pub fn evaluate(&self, assignment: &[BigRational]) -> BigRational {
        assert!(assignment.len() >= self.max_var_index());
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &assignment[v];
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluation with the coefficients reduced into 𝔽_p.
    pub fn evaluate_mod(&self, f: &PrimeField, assignment: &[u64]) -> u64 {
        let p = BigInt::from(f.modulus());
        let to_fp = |x: &BigInt| -> u64 {
            let r = ((x % &p) + &p) % &p;
            r.to_string().parse::<u64>().unwrap()
        };
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let den = to_fp(c.denom());
            let num = to_fp(c.numer());
            let inv = f.inv(&den).expect("denominator invertible mod p");
            let mut t = f.mul(&num, &inv);
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = f.mul(&t, &assignment[v]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Partial evaluation: fixes some variables to rational values.
    pub fn substitute_values(&self, values: &[(usize, BigRational)]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut e = m.0;
            for (var, val) in values {
                for _ in 0..e[*var] {
                    coef *= val;
                }
                e[*var] = 0;
            }
            out.insert_term(Mono(e), coef);
        }
        out
    }

    /// 1 + the largest variable index that actually occurs.
    pub fn max_var_index(&self) -> usize {
        let mut n = 0;
        for m in self.terms.keys() {
            for v in 0..NVARS {
                if m.0[v] > 0 {
                    n = n.max(v + 1);
                }
            }
        }
        n
    }

    /// Coefficients of `self` as a univariate polynomial in `var`, index =
    /// power of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0;
            e[var] = 0;
            out[k].insert_term(Mono(e), c.clone());
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    /// Sum of terms `coef*a^i*b^j*…` in decreasing canonical order.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(out, "-")?;
                }
            } else if neg {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || *m == Mono::ONE {
                factors.push(if mag.denom().is_one() {
                    mag.numer().to_string()
                } else {
                    format!("{}/{}", mag.numer(), mag.denom())
                });
            }
            for v in 0..NVARS {
                match m.0[v] {
                    0 => {}
                    1 => factors.push(VAR_NAMES[v].to_string()),
                    e => factors.push(format!("{}^{}", VAR_NAMES[v], e)),
                }
            }
            write!(out, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolicError {
    Parse(String),
    /// the condition system is not square, so no determinant constraint
    /// exists; eliminate a variable first
    NotSquare { rows: usize, cols: usize },
    /// substitution target does not occur linearly
    NotLinear { var: usize, degree: u8 },
    UnknownVariable(char),
}

impl fmt::Display for SymbolicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicError::Parse(s) => write!(f, "parse error: {s}"),
            SymbolicError::NotSquare { rows, cols } => {
                write!(f, "condition system is {rows}×{cols}, not square")
            }
            SymbolicError::NotLinear { var, degree } => write!(
                f,
                "variable {} has degree {degree}, expected 1",
                VAR_NAMES[*var]
            ),
            SymbolicError::UnknownVariable(c) => write!(f, "unknown variable {c:?}"),
        }
    }
}

impl std::error::Error for SymbolicError {}

/// Parses the `Display` format: terms joined by `+`/`-`, each a
/// `*`-separated product of an optional rational coefficient and
/// `var^exp` factors.
pub fn parse_poly(s: &str) -> Result<MultiPoly, SymbolicError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(SymbolicError::Parse("empty polynomial".into()));
    }
    let mut out = MultiPoly::zero();
    let mut term = String::new();
    let mut sign = 1i64;
    let mut pending_sign = 1i64;
    let mut first = true;
    for ch in s.chars() {
        match ch {
            '+' | '-' => {
                if first && term.trim().is_empty() {
                    // leading sign
                    pending_sign = if ch == '-' { -1 } else { 1 };
                    first = false;
                    continue;
                }
                // a sign directly after '^', '*' or '/' belongs to the term
                let tail = term.trim_end().chars().last();
                if matches!(tail, Some('^') | Some('*') | Some('/')) {
                    term.push(ch);
                    continue;
                }
                out = out.add(&parse_term(term.trim(), sign * pending_sign)?);
                term = String::new();
                sign = if ch == '-' { -1 } else { 1 };
                pending_sign = 1;
            }
            _ => {
                first = false;
                term.push(ch);
            }
        }
    }
    out = out.add(&parse_term(term.trim(), sign * pending_sign)?);
    Ok(out)
}

fn parse_term(s: &str, sign: i64) -> Result<MultiPoly, SymbolicError> {
    if s.is_empty() {
        return Err(SymbolicError::Parse("empty term".into()));
    }
    let mut coef = BigRational::from_integer(BigInt::from(sign));
    let mut expo = [0u8; NVARS];
    for factor in s.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(SymbolicError::Parse(format!("empty factor in {s:?}")));
        }
        let first = factor.chars().next().unwrap();
        if first.is_ascii_digit() || first == '-' || first == '+' {
            let f = crate::field::Rationals;
            let c = f
                .parse_elem(factor)
                .map_err(|e| SymbolicError::Parse(format!("{e} in term {s:?}")))?;
            coef *= c;
        } else {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<u8>()
                        .map_err(|_| SymbolicError::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            if name.len() != 1 {
                return Err(SymbolicError::Parse(format!("bad variable {name:?}")));
            }
            let ch = name.chars().next().unwrap();
            let var = VAR_NAMES
                .iter()
                .position(|&v| v == ch)
                .ok_or(SymbolicError::UnknownVariable(ch))?;
            expo[var] = expo[var]
                .checked_add(exp)
                .ok_or_else(|| SymbolicError::Parse("exponent overflow".into()))?;
        }
    }
    let mut p = MultiPoly::zero();
    p.insert_term(Mono(expo), coef);
    Ok(p)
}

/// The polynomial ring ℚ[a..h] as an elimination domain.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolyRing;

impl Domain for PolyRing {
    type Elem = MultiPoly;

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero()
    }
    fn one(&self) -> MultiPoly {
        MultiPoly::one()
    }
    fn from_i64(&self, n: i64) -> MultiPoly {
        MultiPoly::from_i64(n)
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.add(b)
    }
    fn sub(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.sub(b)
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.mul(b)
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        a.neg()
    }
    fn is_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }
    fn exact_div(&self, a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
        a.exact_div(b)
    }
}

// ---------------------------------------------------------------------------
// Symbolic point set-ups

/// A projective point with polynomial coordinates.
pub type SymPoint = [MultiPoly; 3];

/// The nine symbolic points of a set-up: `P1..P8` and the target `P`.
pub struct SymSetup {
    pub tag: SetupTag,
    pub points: Vec<SymPoint>,
    pub target: SymPoint,
    /// number of parameters: 6 for A, 8 for B
    pub nvars: usize,
}

/// The exact coordinate templates of set-up A (parameters a..f) or
/// set-up B (parameters a..h).
pub fn symbolic_point_setup(tag: SetupTag) -> SymSetup {
    let v = |i: usize| MultiPoly::var(i);
    let k = |n: i64| MultiPoly::from_i64(n);
    let (points, nvars) = match tag {
        SetupTag::A => (
            vec![
                [k(0), k(1), k(1)],
                [k(0), k(1), v(0)],
                [k(1), k(0), k(1)],
                [k(1), k(0), v(1)],
                [k(1), k(1), k(1)],
                [k(1), k(1), v(2)],
                [v(3), k(1), v(4)],
                [v(3), k(1), v(5)],
            ],
            6,
        ),
        SetupTag::B => (
            vec![
                [k(0), k(1), k(1)],
                [k(0), k(1), v(0)],
                [k(1), k(0), k(1)],
                [k(1), k(0), v(1)],
                [k(1), k(1), k(1)],
                [k(1), v(2), v(3)],
                [k(1), v(4), v(5)],
                [k(1), v(6), v(7)],
            ],
            8,
        ),
    };
    SymSetup {
        tag,
        points,
        target: [k(0), k(0), k(1)],
        nvars,
    }
}

fn sym_pow(x: &MultiPoly, e: u8) -> MultiPoly {
    x.pow(e as u32)
}

fn falling(e: u8, k: u8) -> Option<i64> {
    if k > e {
        return None;
    }
    let mut acc = 1i64;
    for t in 0..k {
        acc *= (e - t) as i64;
    }
    Some(acc)
}

/// Derivative row over the polynomial ring, mirroring the concrete-field
/// construction.
fn sym_derivative_row(degree: usize, point: &SymPoint, ord: [u8; 3]) -> Vec<MultiPoly> {
    monomials(degree)
        .iter()
        .map(|e| {
            let mut acc = MultiPoly::one();
            for v in 0..3 {
                match falling(e[v], ord[v]) {
                    None => return MultiPoly::zero(),
                    Some(c) => {
                        acc = acc.scale(&BigRational::from_integer(BigInt::from(c)));
                        acc = acc.mul(&sym_pow(&point[v], e[v] - ord[v]));
                    }
                }
            }
            acc
        })
        .collect()
}

/// Index of a coordinate that is identically 1 (every template point has
/// one); derivatives are taken in the other two coordinates.
fn unit_coordinate(point: &SymPoint) -> usize {
    (0..3)
        .rev()
        .find(|&i| point[i] == MultiPoly::one())
        .expect("template points have a coordinate fixed to 1")
}

fn sym_condition_rows(degree: usize, point: &SymPoint, mult: usize) -> Vec<Vec<MultiPoly>> {
    let t = unit_coordinate(point);
    let uv: Vec<usize> = (0..3).filter(|&v| v != t).collect();
    let mut rows = Vec::new();
    for total in 0..mult {
        for du in (0..=total).rev() {
            let dv = total - du;
            let mut ord = [0u8; 3];
            ord[uv[0]] = du as u8;
            ord[uv[1]] = dv as u8;
            rows.push(sym_derivative_row(degree, point, ord));
        }
    }
    rows
}

/// The symbolic condition matrix for a curve specification over a set-up:
/// multiplicity blocks for each base point, plus the evaluation row at P
/// when `through_p` is set.
pub fn sym_condition_matrix(
    setup: &SymSetup,
    degree: usize,
    mults: &[i64; 8],
    through_p: bool,
) -> Mat<MultiPoly> {
    let mut rows = Vec::new();
    for (i, &m) in mults.iter().enumerate() {
        if m > 0 {
            rows.extend(sym_condition_rows(degree, &setup.points[i], m as usize));
        }
    }
    if through_p {
        rows.push(sym_derivative_row(degree, &setup.target, [0, 0, 0]));
    }
    Mat::from_rows(rows)
}

// ---------------------------------------------------------------------------
// General-position polynomials (the set S)

/// All collinearity, conic and singular-cubic degeneracy determinants of
/// the general-position conditions, instantiated at the symbolic set-up:
/// primitive, sign-normalized, constants dropped, deduplicated, in
/// canonical stripping order (ascending total degree, then term count,
/// then display form).
///
/// The raw determinants factor (a collinearity determinant is typically a
/// product of simpler degeneracies), so the list is closed under exact
/// division by other members: whenever one member divides another, the
/// quotient is added as well. This exposes the individual degeneracy
/// factors — e.g. `d` (P7, P8 on the line through P1, P2) comes out of
/// `d·(a−1)` once `a−1` is known.
pub fn general_position_polynomials(tag: SetupTag) -> &'static Vec<MultiPoly> {
    static CACHE_A: OnceLock<Vec<MultiPoly>> = OnceLock::new();
    static CACHE_B: OnceLock<Vec<MultiPoly>> = OnceLock::new();
    let cache = match tag {
        SetupTag::A => &CACHE_A,
        SetupTag::B => &CACHE_B,
    };
    cache.get_or_init(|| {
        let setup = symbolic_point_setup(tag);
        let ring = PolyRing;
        let mut polys: Vec<MultiPoly> = Vec::new();
        let mut push = |p: MultiPoly| {
            let p = p.primitive();
            if !p.is_zero() && !p.is_constant() && !polys.contains(&p) {
                polys.push(p);
            }
        };
        // collinearity of each triple
        for i in 0..8 {
            for j in i + 1..8 {
                for k in j + 1..8 {
                    let rows = vec![
                        sym_derivative_row(1, &setup.points[i], [0, 0, 0]),
                        sym_derivative_row(1, &setup.points[j], [0, 0, 0]),
                        sym_derivative_row(1, &setup.points[k], [0, 0, 0]),
                    ];
                    push(bareiss_det(&ring, &Mat::from_rows(rows)));
                }
            }
        }
        // six points on a conic
        for a in 0..8 {
            for b in a + 1..8 {
                let mut rows = Vec::new();
                for i in 0..8 {
                    if i != a && i != b {
                        rows.push(sym_derivative_row(2, &setup.points[i], [0, 0, 0]));
                    }
                }
                push(bareiss_det(&ring, &Mat::from_rows(rows)));
            }
        }
        // a cubic through all eight points singular at one
        for j in 0..8 {
            let mut mults = [1i64; 8];
            mults[j] = 2;
            let m = sym_condition_matrix(&setup, 3, &mults, false);
            push(bareiss_det(&ring, &m));
        }
        // division closure; a univariate specialization over a large prime
        // rejects almost all non-divisible pairs before the real division
        let probe = DivisibilityProbe::new();
        let mut tried: rustc_hash::FxHashSet<(usize, usize)> = rustc_hash::FxHashSet::default();
        let mut specs: rustc_hash::FxHashMap<(usize, usize), Vec<u64>> =
            rustc_hash::FxHashMap::default();
        let mut fp_terms: Vec<Vec<(Expo, u64)>> = Vec::new();
        let mut seen: rustc_hash::FxHashSet<MultiPoly> = polys.iter().cloned().collect();
        loop {
            while fp_terms.len() < polys.len() {
                fp_terms.push(probe.reduce_terms(&polys[fp_terms.len()]));
            }
            let mut fresh: Vec<MultiPoly> = Vec::new();
            for xi in 0..polys.len() {
                for yi in 0..polys.len() {
                    if xi == yi || !tried.insert((xi, yi)) {
                        continue;
                    }
                    if polys[yi].total_degree() > polys[xi].total_degree() {
                        continue;
                    }
                    let keep = (0..NVARS)
                        .max_by_key(|&v| polys[yi].degree_in(v))
                        .unwrap();
                    if polys[yi].degree_in(keep) > 0 {
                        let xs = specs
                            .entry((xi, keep))
                            .or_insert_with(|| {
                                probe.specialize(&fp_terms[xi], &polys[xi], keep)
                            })
                            .clone();
                        let ys = specs
                            .entry((yi, keep))
                            .or_insert_with(|| {
                                probe.specialize(&fp_terms[yi], &polys[yi], keep)
                            })
                            .clone();
                        if !probe.may_divide_spec(&xs, &ys) {
                            continue;
                        }
                    }
                    if let Some(q) = polys[xi].exact_div(&polys[yi]) {
                        let q = q.primitive();
                        if !q.is_constant() && seen.insert(q.clone()) {
                            fresh.push(q);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            polys.extend(fresh);
        }
        polys.sort_by(strip_order);
        polys.dedup();
        polys
    })
}

/// One-sided divisibility filter: specializes all variables but one to
/// fixed residues mod a large prime and tests univariate divisibility.
/// `false` means definitely not divisible; `true` is inconclusive.
struct DivisibilityProbe {
    field: PrimeField,
    consts: [u64; NVARS],
}

impl DivisibilityProbe {
    fn new() -> DivisibilityProbe {
        DivisibilityProbe {
            field: PrimeField::new(1_000_000_007),
            consts: [
                737_212_713,
                91_240_127,
                401_118_043,
                559_020_911,
                83_115_551,
                662_411_279,
                218_090_081,
                951_112_639,
            ],
        }
    }

    /// Coefficients reduced into 𝔽_p once per polynomial.
    fn reduce_terms(&self, x: &MultiPoly) -> Vec<(Expo, u64)> {
        let f = &self.field;
        let p = BigInt::from(f.modulus());
        let to_fp = |n: &BigInt| -> u64 {
            let r = ((n % &p) + &p) % &p;
            r.to_u64_digits().1.first().copied().unwrap_or(0)
        };
        x.terms()
            .map(|(m, c)| {
                let num = to_fp(c.numer());
                let den = to_fp(c.denom());
                (m.0, f.mul(&num, &f.inv(&den).expect("unit denominator")))
            })
            .collect()
    }

    /// Coefficients of the specialization as a univariate polynomial in
    /// `keep`.
    fn specialize(&self, fp_terms: &[(Expo, u64)], x: &MultiPoly, keep: usize) -> Vec<u64> {
        let f = &self.field;
        let mut out = vec![0u64; x.degree_in(keep) as usize + 1];
        for (e, c) in fp_terms {
            let mut t = *c;
            for v in 0..NVARS {
                if v != keep {
                    for _ in 0..e[v] {
                        t = f.mul(&t, &self.consts[v]);
                    }
                }
            }
            let k = e[keep] as usize;
            out[k] = f.add(&out[k], &t);
        }
        out
    }

    /// `false` means the specializations prove non-divisibility.
    fn may_divide_spec(&self, xs: &[u64], ys: &[u64]) -> bool {
        let f = &self.field;
        let dy = match ys.iter().rposition(|&c| c != 0) {
            Some(d) => d,
            None => return true, // degenerate specialization, no information
        };
        let dx = match xs.iter().rposition(|&c| c != 0) {
            Some(d) => d,
            None => return true,
        };
        if dx < dy {
            return false;
        }
        // univariate long division mod p
        let mut rem = xs.to_vec();
        let lead_inv = f.inv(&ys[dy]).expect("nonzero lead");
        for k in (dy..=dx).rev() {
            let c = f.mul(&rem[k], &lead_inv);
            if c == 0 {
                continue;
            }
            for (j, yc) in ys.iter().enumerate().take(dy + 1) {
                let t = f.mul(&c, yc);
                rem[k - dy + j] = f.sub(&rem[k - dy + j], &t);
            }
        }
        rem.iter().all(|&c| c == 0)
    }
}

/// Canonical stripping order: ascending total degree, then term count,
/// then the display form.
fn strip_order(a: &MultiPoly, b: &MultiPoly) -> std::cmp::Ordering {
    (a.total_degree(), a.num_terms())
        .cmp(&(b.total_degree(), b.num_terms()))
        .then_with(|| a.to_string().cmp(&b.to_string()))
}

/// A constraint determinant together with the degenerate factors stripped
/// from it.
#[derive(Clone, Debug)]
pub struct ConstraintResult {
    pub raw: MultiPoly,
    /// stripped members of S with multiplicities, in stripping order
    pub stripped: Vec<(MultiPoly, u32)>,
    pub residual: MultiPoly,
}

impl ConstraintResult {
    /// Exact multiplication check: raw = residual · Π stripped, up to the
    /// scalar lost to primitive normalization.
    pub fn factorization_holds(&self) -> bool {
        let mut prod = self.residual.clone();
        for (s, m) in &self.stripped {
            prod = prod.mul(&s.pow(*m));
        }
        prod.eq_up_to_scalar(&self.raw)
    }
}

/// Trial division of `raw` by the members of `s_set` in canonical order,
/// with multiplicity; repeated to a fixed point.
pub fn strip_degenerate_factors(raw: &MultiPoly, s_set: &[MultiPoly]) -> ConstraintResult {
    let mut residual = raw.primitive();
    let mut stripped: Vec<(MultiPoly, u32)> = Vec::new();
    if raw.is_zero() {
        return ConstraintResult {
            raw: raw.clone(),
            stripped,
            residual,
        };
    }
    loop {
        let mut changed = false;
        for s in s_set {
            let mut count = 0u32;
            while let Some(q) = residual.exact_div(s) {
                residual = q.primitive();
                count += 1;
                changed = true;
            }
            if count > 0 {
                match stripped.iter_mut().find(|(p, _)| p == s) {
                    Some((_, m)) => *m += count,
                    None => stripped.push((s.clone(), count)),
                }
            }
        }
        if !changed {
            break;
        }
    }
    ConstraintResult {
        raw: raw.clone(),
        stripped,
        residual,
    }
}

/// The symbolic member of the class's linear system through the set-up
/// points: the Cramer kernel vector of the condition matrix, with the
/// common degenerate content divided out. The stripped factors are
/// exactly the loci where the condition system drops rank (there the
/// whole kernel vector vanishes), which is where the determinant
/// constraint would vanish for reasons unrelated to concurrency.
pub fn sym_curve_for_class(
    tag: SetupTag,
    class: &ExceptionalClass,
) -> Result<(Vec<MultiPoly>, Vec<(MultiPoly, u32)>), SymbolicError> {
    let setup = symbolic_point_setup(tag);
    let degree = class.degree() as usize;
    let mut mults = [0i64; 8];
    for (i, m) in mults.iter_mut().enumerate() {
        *m = class.mult(i);
    }
    let cond = sym_condition_matrix(&setup, degree, &mults, false);
    if cond.rows + 1 != cond.cols {
        return Err(SymbolicError::NotSquare {
            rows: cond.rows + 1,
            cols: cond.cols,
        });
    }
    let ring = PolyRing;
    let n = cond.cols;
    let mut minors: Vec<MultiPoly> = Vec::with_capacity(n);
    for j in 0..n {
        let rows: Vec<Vec<MultiPoly>> = (0..cond.rows)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| cond.at(i, c).clone())
                    .collect()
            })
            .collect();
        let det = bareiss_det(&ring, &Mat::from_rows(rows));
        minors.push(if j % 2 == 1 { det.neg() } else { det });
    }
    // strip the common degenerate content
    let mut stripped: Vec<(MultiPoly, u32)> = Vec::new();
    if minors.iter().any(|m| !m.is_zero()) {
        for s in general_position_polynomials(tag) {
            loop {
                let divided: Option<Vec<MultiPoly>> =
                    minors.iter().map(|m| m.exact_div(s)).collect();
                match divided {
                    Some(v) => {
                        minors = v;
                        match stripped.iter_mut().find(|(p, _)| p == s) {
                            Some((_, k)) => *k += 1,
                            None => stripped.push((s.clone(), 1)),
                        }
                    }
                    None => break,
                }
            }
        }
    }
    Ok((minors, stripped))
}

/// The concurrency constraint of a curve class over a set-up: the
/// evaluation at P of the stripped symbolic curve. The raw polynomial is
/// the determinant of the full square system (conditions plus the
/// through-P row); `raw = residual · Π stripped` up to a rational scalar.
pub fn constraint_polynomial(
    tag: SetupTag,
    class: &ExceptionalClass,
    through_p: bool,
) -> Result<ConstraintResult, SymbolicError> {
    let setup = symbolic_point_setup(tag);
    if !through_p {
        // no through-P row: the condition system itself must be square and
        // its determinant is the constraint (a pure degeneracy test)
        let degree = class.degree() as usize;
        let mut mults = [0i64; 8];
        for (i, m) in mults.iter_mut().enumerate() {
            *m = class.mult(i);
        }
        let m = sym_condition_matrix(&setup, degree, &mults, false);
        if m.rows != m.cols {
            return Err(SymbolicError::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        let raw = bareiss_det(&PolyRing, &m);
        return Ok(strip_degenerate_factors(
            &raw,
            general_position_polynomials(tag),
        ));
    }
    let degree = class.degree() as usize;
    debug_assert_eq!(num_monomials(degree), num_monomials(degree));
    let (curve, stripped) = sym_curve_for_class(tag, class)?;
    let p_row = sym_derivative_row(degree, &setup.target, [0, 0, 0]);
    let mut residual = MultiPoly::zero();
    for (c, p) in curve.iter().zip(&p_row) {
        residual = residual.add(&c.mul(p));
    }
    let mut raw = residual.clone();
    for (s, k) in &stripped {
        raw = raw.mul(&s.pow(*k));
    }
    Ok(ConstraintResult {
        raw,
        stripped,
        residual: residual.primitive(),
    })
}

/// Solves `poly = 0` for `var`, which must occur linearly: returns
/// `(num, den)` with `var = num/den` and `den` the coefficient of `var`.
pub fn solve_linear(
    poly: &MultiPoly,
    var: usize,
) -> Result<(MultiPoly, MultiPoly), SymbolicError> {
    let coeffs = poly.coefficients_in(var);
    if coeffs.len() != 2 {
        return Err(SymbolicError::NotLinear {
            var,
            degree: poly.degree_in(var),
        });
    }
    Ok((coeffs[0].neg(), coeffs[1].clone()))
}

/// Substitutes `var = num/den` into `poly`, clearing denominators:
/// returns `den^k · poly(var ← num/den)` together with the power `k` and
/// the side condition `den ≠ 0`.
pub struct Substitution {
    pub result: MultiPoly,
    pub den_power: u32,
    pub side_condition: MultiPoly,
}

pub fn substitute_linear(
    poly: &MultiPoly,
    var: usize,
    num: &MultiPoly,
    den: &MultiPoly,
) -> Substitution {
    let coeffs = poly.coefficients_in(var);
    let k = coeffs.len().saturating_sub(1) as u32;
    let mut acc = MultiPoly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        let term = c.mul(&num.pow(i as u32)).mul(&den.pow(k - i as u32));
        acc = acc.add(&term);
    }
    Substitution {
        result: acc,
        den_power: k,
        side_condition: den.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn parse_display_roundtrip() {
        let f1 = p("2*a^2*b - c + 5/4*d*e - 1");
        assert_eq!(p(&f1.to_string()), f1);
        assert_eq!(p("a - a"), MultiPoly::zero());
        assert_eq!(p("-a*b").to_string(), "-a*b");
        assert!(parse_poly("2x").is_err());
    }

    #[test]
    fn arithmetic_basics() {
        let x = MultiPoly::var(0);
        let y = MultiPoly::var(1);
        let s = x.add(&y);
        let d = x.sub(&y);
        assert_eq!(s.mul(&d), p("a^2 - b^2"));
        assert_eq!(p("a + b").pow(2), p("a^2 + 2*a*b + b^2"));
    }

    #[test]
    fn exact_division() {
        let prod = p("a^2 - b^2");
        assert_eq!(prod.exact_div(&p("a - b")), Some(p("a + b")));
        assert_eq!(prod.exact_div(&p("a + b")), Some(p("a - b")));
        assert_eq!(prod.exact_div(&p("a + 1")), None);
        // content handling
        assert_eq!(p("2*a + 2*b").exact_div(&p("4*a + 4*b")), Some(p("1/2")));
    }

    #[test]
    fn primitive_and_scalar_equality() {
        let a = p("2*a - 2*b");
        let b = p("-3*a + 3*b");
        assert!(a.eq_up_to_scalar(&b));
        // leading coefficient (of b, the larger variable) is positive
        assert_eq!(a.primitive(), p("b - a"));
        assert!(!a.eq_up_to_scalar(&p("a + b")));
    }

    #[test]
    fn coefficients_and_linear_solve() {
        let f = p("a*b + a*c - d");
        let (num, den) = solve_linear(&f, 0).unwrap();
        assert_eq!(num, p("d"));
        assert_eq!(den, p("b + c"));
        assert!(solve_linear(&p("a^2 + b"), 0).is_err());
    }

    #[test]
    fn substitution_clears_denominators() {
        // e ↦ (d²−1)/(d−1) in (d−1)(e−d−1) gives 0 with side condition d−1
        let constraint = p("d - 1").mul(&p("e - d - 1"));
        let sub = substitute_linear(&constraint, 4, &p("d^2 - 1"), &p("d - 1"));
        assert!(sub.result.is_zero());
        assert_eq!(sub.side_condition, p("d - 1"));
        // identity substitution x ↦ x/1 changes nothing
        let id = substitute_linear(&constraint, 4, &MultiPoly::var(4), &MultiPoly::one());
        assert_eq!(id.result, constraint);
    }

    #[test]
    fn evaluate_examples() {
        let f = p("a^2*b - 3/2*c + 7");
        let q = crate::field::Rationals;
        let vals: Vec<_> = ["2", "3", "4", "0", "0", "0", "0", "0"]
            .iter()
            .map(|s| q.parse_elem(s).unwrap())
            .collect();
        assert_eq!(f.evaluate(&vals), q.parse_elem("13").unwrap());
        // constant term at the all-zero assignment
        let zeros = vec![q.zero(); 8];
        assert_eq!(f.evaluate(&zeros), q.parse_elem("7").unwrap());
    }

    #[test]
    fn setup_templates() {
        let a = symbolic_point_setup(SetupTag::A);
        assert_eq!(a.points[6], [p("d"), p("1"), p("e")]); // P7 = (d:1:e)
        assert_eq!(a.target, [p("0"), p("0"), p("1")]);
        let b = symbolic_point_setup(SetupTag::B);
        assert_eq!(b.points[5], [p("1"), p("c"), p("d")]); // P6 = (1:c:d)
        assert_eq!(b.nvars, 8);
    }

    #[test]
    fn conic_condition_system_matches_displayed_equations() {
        // conic through P1, P3, P5, P6, P7 and P over set-up A
        let setup = symbolic_point_setup(SetupTag::A);
        let m = sym_condition_matrix(&setup, 2, &[1, 0, 1, 0, 1, 1, 1, 0], true);
        assert_eq!((m.rows, m.cols), (6, 6));
        let expect = [
            ["0", "0", "0", "1", "1", "1"],       // P1
            ["1", "0", "1", "0", "0", "1"],       // P3
            ["1", "1", "1", "1", "1", "1"],       // P5
            ["1", "1", "c", "1", "c", "c^2"],     // P6
            ["d^2", "d", "d*e", "1", "e", "e^2"], // P7
            ["0", "0", "0", "0", "0", "1"],       // P
        ];
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(m.at(i, j), &p(expect[i][j]), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn mono_order_is_graded() {
        let a = Mono::var(0);
        let b = Mono::var(1);
        let ab = a.mul(&b);
        assert!(a < b, "a < b in the tie-break order");
        assert!(b < ab, "degree dominates");
        assert!(Mono::ONE < a);
    }
}
