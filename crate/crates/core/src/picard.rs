//! The Picard lattice of a del Pezzo surface of degree 1: the 240
//! exceptional classes, the intersection pairing, the canonical class and
//! the partner involution.
//!
//! A class is written `a·L − Σ bᵢ·Eᵢ` in the standard basis obtained by
//! blowing up eight points, and stored as the integer vector
//! `(a, b₁, …, b₈)`. The intersection pairing in these coordinates is
//! `v·w = a·a′ − Σ bᵢ·b′ᵢ`.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;

/// Number of exceptional classes on a del Pezzo surface of degree 1.
pub const NUM_CLASSES: usize = 240;

/// A vector in the Picard lattice, stored as `(a, b1..b8)` for `aL − Σ bᵢEᵢ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PicVec(pub [i64; 9]);

impl PicVec {
    pub const ZERO: PicVec = PicVec([0; 9]);

    /// Coefficient of `L`, i.e. the degree of the plane model.
    pub fn degree(&self) -> i64 {
        self.0[0]
    }

    /// Multiplicity at the i-th blown-up point, 0-based.
    pub fn mult(&self, i: usize) -> i64 {
        self.0[1 + i]
    }

    /// Intersection pairing: `a·a′ − Σ bᵢ·b′ᵢ`.
    pub fn pairing(&self, other: &PicVec) -> i64 {
        let mut s = self.0[0] * other.0[0];
        for i in 1..9 {
            s -= self.0[i] * other.0[i];
        }
        s
    }

    pub fn add(&self, other: &PicVec) -> PicVec {
        let mut v = [0; 9];
        for i in 0..9 {
            v[i] = self.0[i] + other.0[i];
        }
        PicVec(v)
    }

    pub fn sub(&self, other: &PicVec) -> PicVec {
        let mut v = [0; 9];
        for i in 0..9 {
            v[i] = self.0[i] - other.0[i];
        }
        PicVec(v)
    }

    pub fn scale(&self, k: i64) -> PicVec {
        let mut v = [0; 9];
        for i in 0..9 {
            v[i] = k * self.0[i];
        }
        PicVec(v)
    }
}

impl fmt::Display for PicVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseClassError(pub String);

impl fmt::Display for ParseClassError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed class vector: {}", self.0)
    }
}

impl std::error::Error for ParseClassError {}

impl FromStr for PicVec {
    type Err = ParseClassError;

    /// Parses the text form: nine space-separated integers `a b1 … b8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 9 {
            return Err(ParseClassError(format!(
                "expected 9 integers, got {}: {s:?}",
                parts.len()
            )));
        }
        let mut v = [0i64; 9];
        for (i, p) in parts.iter().enumerate() {
            v[i] = p
                .parse()
                .map_err(|_| ParseClassError(format!("bad integer {p:?} in {s:?}")))?;
        }
        Ok(PicVec(v))
    }
}

/// The canonical class `K = −3L + Σ Eᵢ`, stored as `(−3, −1, …, −1)`.
pub const CANONICAL: PicVec = PicVec([-3, -1, -1, -1, -1, -1, -1, -1, -1]);

/// An exceptional class: self-pairing −1 and anticanonical degree 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExceptionalClass(PicVec);

impl ExceptionalClass {
    /// Wraps a lattice vector, checking the two defining equations
    /// `a² − Σbᵢ² = −1` and `3a − Σbᵢ = 1`.
    pub fn new(v: PicVec) -> Result<ExceptionalClass, ParseClassError> {
        if v.pairing(&v) == -1 && v.pairing(&CANONICAL) == -1 {
            Ok(ExceptionalClass(v))
        } else {
            Err(ParseClassError(format!(
                "not an exceptional class (self-pairing {}, K-pairing {}): {v}",
                v.pairing(&v),
                v.pairing(&CANONICAL)
            )))
        }
    }

    pub fn vec(&self) -> &PicVec {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.degree()
    }

    pub fn mult(&self, i: usize) -> i64 {
        self.0.mult(i)
    }

    /// The class `Eᵢ` of the exceptional divisor above the i-th point (0-based).
    pub fn blowup(i: usize) -> ExceptionalClass {
        let mut v = [0i64; 9];
        v[1 + i] = -1;
        ExceptionalClass(PicVec(v))
    }

    /// The class of the line through points i and j (0-based, distinct).
    pub fn line(i: usize, j: usize) -> ExceptionalClass {
        assert_ne!(i, j);
        let mut v = [0i64; 9];
        v[0] = 1;
        v[1 + i] = 1;
        v[1 + j] = 1;
        ExceptionalClass(PicVec(v))
    }

    /// The cubic through all points except i, with a double point at j.
    pub fn cubic(i: usize, j: usize) -> ExceptionalClass {
        assert_ne!(i, j);
        let mut v = [1i64; 9];
        v[0] = 3;
        v[1 + i] = 0;
        v[1 + j] = 2;
        ExceptionalClass(PicVec(v))
    }

    /// The quartic through all eight points, double at i, j and k.
    pub fn quartic(i: usize, j: usize, k: usize) -> ExceptionalClass {
        assert!(i != j && j != k && i != k);
        let mut v = [1i64; 9];
        v[0] = 4;
        v[1 + i] = 2;
        v[1 + j] = 2;
        v[1 + k] = 2;
        ExceptionalClass(PicVec(v))
    }

    /// True for the eight blow-up classes `E₁..E₈` (no plane model).
    pub fn is_blowup(&self) -> bool {
        self.0.degree() == 0
    }

    /// True for the 28 line classes.
    pub fn is_line(&self) -> bool {
        self.0.degree() == 1
    }

    pub fn pairing(&self, other: &ExceptionalClass) -> i64 {
        self.0.pairing(&other.0)
    }

    /// The unique class with `e·f = 3`, concretely `−2K − e`.
    pub fn partner(&self) -> ExceptionalClass {
        ExceptionalClass(CANONICAL.scale(-2).sub(&self.0))
    }

    /// Counts of classes `f` by pairing value 3, 2, 1, 0 with `self`.
    pub fn pairing_distribution(&self, all: &ClassList) -> (usize, usize, usize, usize) {
        let mut n = [0usize; 4];
        for f in all.iter() {
            if f == self {
                continue;
            }
            let w = self.pairing(f);
            assert!((0..=3).contains(&w), "unexpected pairing {w}");
            n[w as usize] += 1;
        }
        (n[3], n[2], n[1], n[0])
    }
}

impl fmt::Display for ExceptionalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for ExceptionalClass {
    type Err = ParseClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExceptionalClass::new(s.parse()?)
    }
}

/// The 240 exceptional classes in canonical (lexicographic) order, with
/// index lookup.
pub struct ClassList {
    classes: Vec<ExceptionalClass>,
    index: FxHashMap<PicVec, u8>,
}

impl ClassList {
    fn build() -> ClassList {
        let taxonomy = taxonomy_classes();
        let searched = lattice_solutions();
        assert_eq!(
            taxonomy, searched,
            "taxonomy and lattice-equation enumeration disagree"
        );
        let mut index = FxHashMap::default();
        for (i, c) in taxonomy.iter().enumerate() {
            index.insert(*c.vec(), i as u8);
        }
        assert_eq!(taxonomy.len(), NUM_CLASSES);
        assert_eq!(index.len(), NUM_CLASSES);
        ClassList {
            classes: taxonomy,
            index,
        }
    }

    /// The shared, lazily-built instance.
    pub fn get() -> &'static ClassList {
        use std::sync::OnceLock;
        static INSTANCE: OnceLock<ClassList> = OnceLock::new();
        INSTANCE.get_or_init(ClassList::build)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn class(&self, i: u8) -> &ExceptionalClass {
        &self.classes[i as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExceptionalClass> {
        self.classes.iter()
    }

    /// Canonical index of a class, if it is one of the 240.
    pub fn index_of(&self, v: &PicVec) -> Option<u8> {
        self.index.get(v).copied()
    }

    pub fn index_of_class(&self, c: &ExceptionalClass) -> u8 {
        self.index[c.vec()]
    }
}

/// The 240 classes generated family by family from the blow-up description:
/// blow-up classes, lines through 2 points, conics through 5, cubics with a
/// double point, quartics with three double points, quintics with six, and
/// sextics with seven double points and one triple point.
fn taxonomy_classes() -> Vec<ExceptionalClass> {
    let mut out = Vec::with_capacity(NUM_CLASSES);
    // E_i
    for i in 0..8 {
        out.push(ExceptionalClass::blowup(i));
    }
    // lines l_{i,j}
    for i in 0..8 {
        for j in i + 1..8 {
            out.push(ExceptionalClass::line(i, j));
        }
    }
    // conics through five points: multiplicity 1 at 5 of the 8
    for mask in 0u32..256 {
        if mask.count_ones() == 5 {
            let mut v = [0i64; 9];
            v[0] = 2;
            for i in 0..8 {
                if mask & (1 << i) != 0 {
                    v[1 + i] = 1;
                }
            }
            out.push(ExceptionalClass::new(PicVec(v)).unwrap());
        }
    }
    // cubics c_{i,j}
    for i in 0..8 {
        for j in 0..8 {
            if i != j {
                out.push(ExceptionalClass::cubic(i, j));
            }
        }
    }
    // quartics q_{i,j,k}
    for i in 0..8 {
        for j in i + 1..8 {
            for k in j + 1..8 {
                out.push(ExceptionalClass::quartic(i, j, k));
            }
        }
    }
    // quintics: double at six points, simple at the remaining two
    for i in 0..8 {
        for j in i + 1..8 {
            let mut v = [2i64; 9];
            v[0] = 5;
            v[1 + i] = 1;
            v[1 + j] = 1;
            out.push(ExceptionalClass::new(PicVec(v)).unwrap());
        }
    }
    // sextics: triple at one point, double at the rest
    for i in 0..8 {
        let mut v = [2i64; 9];
        v[0] = 6;
        v[1 + i] = 3;
        out.push(ExceptionalClass::new(PicVec(v)).unwrap());
    }
    out.sort();
    out
}

/// Independent generation: all integer solutions of `a² − Σbᵢ² = −1`,
/// `3a − Σbᵢ = 1`. Cauchy–Schwarz on the two equations gives
/// `(3a−1)² ≤ 8(a²+1)`, hence `−1 ≤ a ≤ 7`; the `bᵢ` are bounded by
/// `bᵢ² ≤ a²+1`.
fn lattice_solutions() -> Vec<ExceptionalClass> {
    let mut out = Vec::new();
    for a in -1..=7i64 {
        let target_sum = 3 * a - 1;
        let target_sq = a * a + 1;
        let bmax = (0..).take_while(|b| b * b <= target_sq).last().unwrap();
        let mut b = [0i64; 8];
        search_mults(&mut out, a, &mut b, 0, target_sum, target_sq, bmax);
    }
    out.sort();
    out
}

fn search_mults(
    out: &mut Vec<ExceptionalClass>,
    a: i64,
    b: &mut [i64; 8],
    pos: usize,
    rem_sum: i64,
    rem_sq: i64,
    bmax: i64,
) {
    if pos == 8 {
        if rem_sum == 0 && rem_sq == 0 {
            let mut v = [0i64; 9];
            v[0] = a;
            v[1..].copy_from_slice(b);
            out.push(ExceptionalClass::new(PicVec(v)).unwrap());
        }
        return;
    }
    let slots = (8 - pos) as i64;
    for x in -bmax..=bmax {
        let sq = rem_sq - x * x;
        if sq < 0 {
            continue;
        }
        let sum = rem_sum - x;
        // remaining slots must be able to reach the sum: |sum| ≤ slots·bmax
        // and sum² ≤ slots·sq by Cauchy–Schwarz
        if (sum.abs() > (slots - 1) * bmax || sum * sum > (slots - 1).max(1) * sq)
            && !(slots == 1 && sum == 0 && sq == 0) {
                continue;
            }
        b[pos] = x;
        search_mults(out, a, b, pos + 1, sum, sq, bmax);
    }
    b[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> ExceptionalClass {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_class_identities() {
        assert_eq!(CANONICAL.pairing(&CANONICAL), 1);
        for c in ClassList::get().iter() {
            assert_eq!(c.vec().pairing(&CANONICAL), -1);
        }
    }

    #[test]
    fn all_classes_basics() {
        let all = ClassList::get();
        assert_eq!(all.len(), 240);
        assert!(all.iter().any(|c| c == &e("0 -1 0 0 0 0 0 0 0")));
        assert!(all.iter().any(|c| c == &e("6 3 2 2 2 2 2 2 2")));
        // canonical order is lexicographic
        let mut sorted: Vec<_> = all.iter().cloned().collect();
        sorted.sort();
        assert_eq!(sorted, all.iter().cloned().collect::<Vec<_>>());
    }

    #[test]
    fn family_cardinalities() {
        let all = ClassList::get();
        let mut by_degree = [0usize; 7];
        for c in all.iter() {
            by_degree[c.degree() as usize] += 1;
        }
        assert_eq!(by_degree, [8, 28, 56, 56, 56, 28, 8]);
        assert_eq!(by_degree.iter().sum::<usize>(), 240);
    }

    #[test]
    fn pairing_examples() {
        let e1 = ExceptionalClass::blowup(0);
        assert_eq!(e1.pairing(&e1), -1);
        assert_eq!(e("1 1 1 0 0 0 0 0 0").pairing(&e1), 1);
        assert_eq!(e1.pairing(&e("6 3 2 2 2 2 2 2 2")), 3);
    }

    #[test]
    fn partner_examples() {
        let e1 = ExceptionalClass::blowup(0);
        assert_eq!(e1.partner(), e("6 3 2 2 2 2 2 2 2"));
        assert_eq!(e("1 1 1 0 0 0 0 0 0").partner(), e("5 1 1 2 2 2 2 2 2"));
        for c in ClassList::get().iter() {
            let p = c.partner();
            assert_ne!(&p, c, "partner must be fixed-point-free");
            assert_eq!(p.partner(), *c);
            assert_eq!(c.pairing(&p), 3);
        }
    }

    #[test]
    fn pairing_distribution_all_classes() {
        let all = ClassList::get();
        for c in all.iter() {
            let (n3, n2, n1, n0) = c.pairing_distribution(all);
            assert_eq!((n3, n2, n1, n0), (1, 56, 126, 56));
            assert_eq!(n3 + n2 + n1 + n0, 239);
        }
    }

    #[test]
    fn root_correspondence() {
        // e ↦ e + K maps classes bijectively onto self-pairing −2 vectors
        // orthogonal to K.
        let all = ClassList::get();
        let mut roots = std::collections::HashSet::new();
        for c in all.iter() {
            let r = c.vec().add(&CANONICAL);
            assert_eq!(r.pairing(&r), -2);
            assert_eq!(r.pairing(&CANONICAL), 0);
            roots.insert(r);
        }
        assert_eq!(roots.len(), 240);
    }

    #[test]
    fn parse_roundtrip_and_rejects() {
        let c = e("3 1 1 1 1 1 1 0 2");
        assert_eq!(c.to_string(), "3 1 1 1 1 1 1 0 2");
        assert!("1 1 1 1 0 0 0 0 0".parse::<ExceptionalClass>().is_err());
        assert!("1 2 3".parse::<ExceptionalClass>().is_err());
    }
}
