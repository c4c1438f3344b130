//! Exact arithmetic in the dihedral group `D_n` of order `2n`.
//!
//! Elements are kept in the normal form `ρ^rot σ^flip` with `0 <= rot < n`.
//! Subgroups are stored extensionally as sorted element sets, which is cheap
//! at the sizes this crate works with and gives deterministic coset
//! representatives.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("dihedral parameter must be at least 1")]
    ZeroOrder,
    #[error("element belongs to D_{found}, expected D_{expected}")]
    ParameterMismatch { expected: u32, found: u32 },
    #[error("coset order is only defined for rotations, got {0}")]
    NotARotation(GroupElement),
    #[error("element list is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("generator list is empty")]
    NoGenerators,
    #[error("no value assigned to generator `{0}`")]
    UnknownGenerator(String),
    #[error("cannot parse group element `{0}`")]
    Parse(String),
}

/// An element `ρ^rot σ^flip` of `D_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawElement")]
pub struct GroupElement {
    rot: u32,
    flip: bool,
    n: u32,
}

#[derive(Deserialize)]
struct RawElement {
    rot: i64,
    flip: bool,
    n: u32,
}

impl TryFrom<RawElement> for GroupElement {
    type Error = GroupError;

    fn try_from(raw: RawElement) -> Result<Self, Self::Error> {
        Ok(DihedralGroup::new(raw.n)?.element(raw.rot, raw.flip))
    }
}

impl GroupElement {
    fn raw(n: u32, rot: i64, flip: bool) -> Self {
        GroupElement {
            rot: rot.rem_euclid(n as i64) as u32,
            flip,
            n,
        }
    }

    pub fn rot(&self) -> u32 {
        self.rot
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_rotation(&self) -> bool {
        !self.flip
    }

    pub fn is_identity(&self) -> bool {
        !self.flip && self.rot == 0
    }

    pub fn try_mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        if self.n != other.n {
            return Err(GroupError::ParameterMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        // ρ^a σ^f · ρ^b σ^g = ρ^(a ± b) σ^(f+g), since σ ρ^b = ρ^-b σ.
        let b = if self.flip {
            -(other.rot as i64)
        } else {
            other.rot as i64
        };
        Ok(GroupElement::raw(
            self.n,
            self.rot as i64 + b,
            self.flip ^ other.flip,
        ))
    }

    pub fn inverse(&self) -> GroupElement {
        if self.flip {
            *self
        } else {
            GroupElement::raw(self.n, -(self.rot as i64), false)
        }
    }

    /// `self^e` for any integer `e`, negative exponents included.
    pub fn pow(&self, e: i64) -> GroupElement {
        if self.flip {
            if e.rem_euclid(2) == 0 {
                GroupElement::raw(self.n, 0, false)
            } else {
                *self
            }
        } else {
            let n = self.n as i64;
            let r = ((self.rot as i64) * e.rem_euclid(n)).rem_euclid(n);
            GroupElement::raw(self.n, r, false)
        }
    }

    /// Least `k >= 1` with `self^k = 1`.
    pub fn order(&self) -> u32 {
        if self.flip {
            2
        } else {
            self.n / self.n.gcd(&self.rot)
        }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    /// Panics when the two factors live in different dihedral groups; use
    /// [`GroupElement::try_mul`] for a checked product.
    fn mul(self, rhs: GroupElement) -> GroupElement {
        self.try_mul(&rhs)
            .unwrap_or_else(|e| panic!("dihedral product: {e}"))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: rotations before reflections, then by exponent.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.flip, self.rot).cmp(&(other.n, other.flip, other.rot))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r^{}", self.rot)?;
        if self.flip {
            write!(f, " s")?;
        }
        Ok(())
    }
}

/// The dihedral group `D_n = <ρ, σ | ρ^n = σ^2 = (σρ)^2 = 1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DihedralGroup {
    n: u32,
}

impl DihedralGroup {
    pub fn new(n: u32) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::ZeroOrder);
        }
        Ok(DihedralGroup { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        2 * self.n
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::raw(self.n, 0, false)
    }

    /// The rotation generator `ρ`.
    pub fn rho(&self) -> GroupElement {
        GroupElement::raw(self.n, 1, false)
    }

    /// The reflection generator `σ`.
    pub fn sigma(&self) -> GroupElement {
        GroupElement::raw(self.n, 0, true)
    }

    /// `ρ^rot σ^flip`, with `rot` reduced modulo `n`.
    pub fn element(&self, rot: i64, flip: bool) -> GroupElement {
        GroupElement::raw(self.n, rot, flip)
    }

    pub fn rotation(&self, rot: i64) -> GroupElement {
        self.element(rot, false)
    }

    /// The reflection `ρ^rot σ`.
    pub fn reflection(&self, rot: i64) -> GroupElement {
        self.element(rot, true)
    }

    /// All `2n` elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        [false, true]
            .into_iter()
            .flat_map(move |flip| (0..self.n).map(move |r| self.element(r as i64, flip)))
    }

    pub fn check(&self, a: &GroupElement) -> Result<(), GroupError> {
        if a.n != self.n {
            Err(GroupError::ParameterMismatch {
                expected: self.n,
                found: a.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        self.check(b)?;
        a.try_mul(b)
    }

    pub fn element_order(&self, a: &GroupElement) -> Result<u32, GroupError> {
        self.check(a)?;
        Ok(a.order())
    }

    pub fn full(&self) -> Subgroup {
        Subgroup {
            n: self.n,
            elements: self.elements().collect(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup {
            n: self.n,
            elements: vec![self.identity()],
        }
    }

    /// Closure of `gens` under multiplication.
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Result<Subgroup, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        for g in gens {
            self.check(g)?;
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x * *g;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup {
            n: self.n,
            elements: seen.into_iter().collect(),
        })
    }

    /// Left cosets `gH`, sorted by their canonical (minimal) representative.
    pub fn left_cosets(&self, h: &Subgroup) -> Result<Vec<Coset>, GroupError> {
        self.check_subgroup(h)?;
        let mut assigned: BTreeMap<GroupElement, usize> = BTreeMap::new();
        let mut cosets = Vec::new();
        for g in self.elements() {
            if assigned.contains_key(&g) {
                continue;
            }
            let mut members: Vec<GroupElement> = h.iter().map(|x| g * *x).collect();
            members.sort();
            for m in &members {
                assigned.insert(*m, cosets.len());
            }
            cosets.push(Coset {
                representative: members[0],
                members,
            });
        }
        cosets.sort_by_key(|c| c.representative);
        Ok(cosets)
    }

    /// Least `d >= 1` with `r^d` in `H`: the order of `r C` in `C_n / C`
    /// where `C` is the rotation part of `H`.
    pub fn quotient_coset_order(&self, r: &GroupElement, h: &Subgroup) -> Result<u32, GroupError> {
        self.check(r)?;
        self.check_subgroup(h)?;
        if r.flip {
            return Err(GroupError::NotARotation(*r));
        }
        let mut x = *r;
        let mut d = 1;
        while !h.contains(&x) {
            x = x * *r;
            d += 1;
        }
        Ok(d)
    }

    pub fn evaluate_word(&self, w: &Word, assignment: &Assignment) -> Result<GroupElement, GroupError> {
        w.evaluate(self, assignment)
    }

    fn check_subgroup(&self, h: &Subgroup) -> Result<(), GroupError> {
        if h.n != self.n {
            Err(GroupError::ParameterMismatch {
                expected: self.n,
                found: h.n,
            })
        } else {
            Ok(())
        }
    }

    /// Parse the string form produced by `Display` (`"r^3 s"`, `"r^2"`),
    /// plus the shorthands `"1"`, `"e"`, `"r"`, `"s"`, `"rs"` and `"r^{-1}"`.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let err = || GroupError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "1" || compact == "e" {
            return Ok(self.identity());
        }
        let (body, flip) = match compact.strip_suffix('s') {
            Some(rest) => (rest, true),
            None => (compact.as_str(), false),
        };
        if body.is_empty() {
            return Ok(self.element(0, flip));
        }
        let exp = body.strip_prefix('r').ok_or_else(err)?;
        let rot = if exp.is_empty() {
            1
        } else {
            let e = exp.strip_prefix('^').ok_or_else(err)?;
            let e = e
                .strip_prefix('{')
                .and_then(|e| e.strip_suffix('}'))
                .unwrap_or(e);
            e.parse::<i64>().map_err(|_| err())?
        };
        Ok(self.element(rot, flip))
    }
}

/// Parses with an explicit `n`, written `"r^3 s @ 6"`; used by tests and
/// the command line where no ambient group is at hand.
impl FromStr for GroupElement {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (elem, n) = s.split_once('@').ok_or_else(|| GroupError::Parse(s.to_string()))?;
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| GroupError::Parse(s.to_string()))?;
        DihedralGroup::new(n)?.parse_element(elem)
    }
}

/// A subgroup of `D_n`, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    n: u32,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    /// Checks closure and the presence of the identity.
    pub fn from_elements(group: &DihedralGroup, elems: &[GroupElement]) -> Result<Subgroup, GroupError> {
        for e in elems {
            group.check(e)?;
        }
        let set: BTreeSet<GroupElement> = elems.iter().copied().collect();
        if !set.contains(&group.identity()) {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        for a in &set {
            for b in &set {
                let c = *a * *b;
                if !set.contains(&c) {
                    return Err(GroupError::NotASubgroup(format!("{a} * {b} = {c} is missing")));
                }
            }
        }
        Ok(Subgroup {
            n: group.n,
            elements: set.into_iter().collect(),
        })
    }

    pub fn order(&self) -> u32 {
        self.elements.len() as u32
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    /// The rotation subgroup `H ∩ C_n`.
    pub fn rotations(&self) -> Subgroup {
        Subgroup {
            n: self.n,
            elements: self.elements.iter().copied().filter(|g| !g.flip).collect(),
        }
    }

    /// `c⁻¹ H c`.
    pub fn conjugate_by(&self, c: &GroupElement) -> Subgroup {
        let ci = c.inverse();
        let mut elements: Vec<GroupElement> = self.elements.iter().map(|h| ci * *h * *c).collect();
        elements.sort();
        Subgroup { n: self.n, elements }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    pub representative: GroupElement,
    pub members: Vec<GroupElement>,
}

/// A word in named generators, e.g. `(s r s)^(l-1) s`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word {
    letters: Vec<(String, i64)>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    /// The single letter `name`.
    pub fn gen(name: &str) -> Word {
        Word::gen_pow(name, 1)
    }

    pub fn gen_pow(name: &str, exp: i64) -> Word {
        Word {
            letters: vec![(name.to_string(), exp)],
        }
    }

    /// Juxtaposition of several words, left to right.
    pub fn product<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        Word {
            letters: parts
                .into_iter()
                .flat_map(|w| w.letters.iter().cloned())
                .collect(),
        }
    }

    pub fn then(&self, other: &Word) -> Word {
        Word::product([self, other])
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|(g, e)| (g.clone(), -e))
                .collect(),
        }
    }

    /// `w^k`; negative `k` repeats the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.letters.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend(base.letters.iter().cloned());
        }
        Word { letters }
    }

    pub fn letters(&self) -> &[(String, i64)] {
        &self.letters
    }

    /// Merge adjacent powers of the same generator and drop zero exponents.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<(String, i64)> = Vec::new();
        for (g, e) in &self.letters {
            match out.last_mut() {
                Some((last, le)) if last == g => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ if *e == 0 => {}
                _ => out.push((g.clone(), *e)),
            }
        }
        Word { letters: out }
    }

    pub fn evaluate(&self, group: &DihedralGroup, assignment: &Assignment) -> Result<GroupElement, GroupError> {
        let mut acc = group.identity();
        for (g, e) in &self.letters {
            let x = assignment
                .get(g)
                .ok_or_else(|| GroupError::UnknownGenerator(g.clone()))?;
            group.check(&x)?;
            acc = acc * x.pow(*e);
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Values for the generator names appearing in a [`Word`].
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    values: BTreeMap<String, GroupElement>,
}

impl Assignment {
    /// `r ↦ ρ`, `s ↦ σ`.
    pub fn standard(group: &DihedralGroup) -> Assignment {
        Assignment::default()
            .with("r", group.rho())
            .with("s", group.sigma())
    }

    pub fn with(mut self, name: &str, value: GroupElement) -> Assignment {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<GroupElement> {
        self.values.get(name).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: u32) -> DihedralGroup {
        DihedralGroup::new(n).unwrap()
    }

    #[test]
    fn sigma_rho_normal_form() {
        for n in 1..12 {
            let g = d(n);
            assert_eq!(g.sigma() * g.rho(), g.reflection(n as i64 - 1));
        }
    }

    #[test]
    fn rotations_add_exponents() {
        let g = d(7);
        assert_eq!(g.rotation(5) * g.rotation(4), g.rotation(2));
    }

    #[test]
    fn reflections_are_involutions() {
        let g = d(9);
        let rs = g.rho() * g.sigma();
        assert!((rs * rs).is_identity());
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let a = d(4).rho();
        let b = d(6).rho();
        assert!(matches!(
            d(4).multiply(&a, &b),
            Err(GroupError::ParameterMismatch { expected: 4, found: 6 })
        ));
    }

    #[test]
    fn element_orders_in_d6() {
        let g = d(6);
        assert_eq!(g.element_order(&g.rho()).unwrap(), 6);
        assert_eq!(g.element_order(&g.rotation(2)).unwrap(), 3);
        assert_eq!(g.element_order(&g.reflection(3)).unwrap(), 2);
        assert_eq!(g.element_order(&g.identity()).unwrap(), 1);
    }

    #[test]
    fn generated_subgroups() {
        let g = d(6);
        let h = g.subgroup_generated(&[g.rotation(3)]).unwrap();
        assert_eq!(h.elements(), &[g.identity(), g.rotation(3)]);
        let all = g.subgroup_generated(&[g.reflection(1), g.sigma()]).unwrap();
        assert_eq!(all.order(), 12);
        let d2 = g.subgroup_generated(&[g.reflection(3), g.sigma()]).unwrap();
        assert_eq!(d2.order(), 4);
        let prod = g.reflection(3) * g.sigma();
        assert_eq!(d2.order(), 2 * prod.order());
        assert!(matches!(g.subgroup_generated(&[]), Err(GroupError::NoGenerators)));
    }

    #[test]
    fn coset_counts() {
        let g = d(6);
        assert_eq!(g.left_cosets(&g.full()).unwrap().len(), 1);
        assert_eq!(g.left_cosets(&g.trivial()).unwrap().len(), 12);
        let h = g
            .subgroup_generated(&[g.rotation(3), g.reflection(2)])
            .unwrap();
        assert_eq!(h.order(), 4);
        let cosets = g.left_cosets(&h).unwrap();
        assert_eq!(cosets.len(), 3);
        let mut covered: Vec<GroupElement> = cosets.iter().flat_map(|c| c.members.clone()).collect();
        covered.sort();
        covered.dedup();
        assert_eq!(covered.len(), 12);
        for c in &cosets {
            assert_eq!(c.representative, *c.members.iter().min().unwrap());
        }
    }

    #[test]
    fn quotient_coset_orders() {
        let g6 = d(6);
        let h = g6.subgroup_generated(&[g6.rotation(3)]).unwrap();
        assert_eq!(g6.quotient_coset_order(&g6.rotation(3), &h).unwrap(), 1);
        assert_eq!(g6.quotient_coset_order(&g6.rho(), &h).unwrap(), 3);
        let g12 = d(12);
        let h = g12.subgroup_generated(&[g12.rotation(6)]).unwrap();
        assert_eq!(g12.quotient_coset_order(&g12.rotation(2), &h).unwrap(), 3);
        assert!(matches!(
            g12.quotient_coset_order(&g12.sigma(), &h),
            Err(GroupError::NotARotation(_))
        ));
    }

    #[test]
    fn empty_word_is_identity() {
        let g = d(5);
        let v = Word::empty().evaluate(&g, &Assignment::standard(&g)).unwrap();
        assert!(v.is_identity());
    }

    #[test]
    fn unknown_generator_is_reported() {
        let g = d(5);
        let w = Word::gen("t");
        assert!(matches!(
            w.evaluate(&g, &Assignment::standard(&g)),
            Err(GroupError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn word_reduction() {
        let w = Word::gen("r")
            .then(&Word::gen_pow("r", 2))
            .then(&Word::gen("s"))
            .then(&Word::gen_pow("s", -1))
            .then(&Word::gen_pow("r", 0));
        assert_eq!(w.reduced().letters(), &[("r".to_string(), 3)]);
    }

    #[test]
    fn string_forms() {
        let g = d(6);
        for x in g.elements() {
            assert_eq!(g.parse_element(&x.to_string()).unwrap(), x);
        }
        assert_eq!(g.parse_element("1").unwrap(), g.identity());
        assert_eq!(g.parse_element("rs").unwrap(), g.reflection(1));
        assert_eq!(g.parse_element("r^{-1}").unwrap(), g.rotation(5));
        assert_eq!(g.parse_element("s").unwrap(), g.sigma());
        assert_eq!("r^2 s @ 6".parse::<GroupElement>().unwrap(), g.reflection(2));
        assert!(g.parse_element("x^2").is_err());
        assert_eq!(g.reflection(3).to_string(), "r^3 s");
    }

    #[test]
    fn json_object_form() {
        let g = d(6);
        let v = serde_json::to_value(g.reflection(4)).unwrap();
        assert_eq!(v, serde_json::json!({"rot": 4, "flip": true, "n": 6}));
    }

    #[test]
    fn non_subgroup_rejected() {
        let g = d(6);
        assert!(Subgroup::from_elements(&g, &[g.identity(), g.rho()]).is_err());
        assert!(Subgroup::from_elements(&g, &[g.sigma()]).is_err());
        let h = Subgroup::from_elements(&g, &[g.identity(), g.sigma()]).unwrap();
        assert_eq!(h.order(), 2);
    }
}
