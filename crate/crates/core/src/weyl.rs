//! The extended affine Weyl group `Z^4 ⋊ S_4` of type `Ã_3` in the GL_4 normalization:
//! lengths, Bruhat order, the admissible set of `μ = (1,1,0,0)`, Ekedahl-Oort elements
//! and the Coxeter-type tables.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Affine simple reflections `s_0, ..., s_3`.
pub const NODES: [usize; 4] = [0, 1, 2, 3];

/// Scaled coordinates of a point in the base alcove `x1 > x2 > x3 > x4 > x1 - 1`,
/// chosen off every affine root hyperplane and every image of one.
const GENERIC: [i64; 4] = [14, 9, 4, 0];
const GENERIC_DENOM: i64 = 20;

/// `t_λ w`, acting on `R^4` by `x -> w(x) + λ` with `w(e_j) = e_{perm[j]}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeylElement {
    translation: [i32; 4],
    perm: [u8; 4],
}

impl fmt::Debug for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{:?}·{:?}", self.translation, self.perm)
    }
}

impl AffineWeylElement {
    pub const IDENTITY: Self = Self { translation: [0; 4], perm: [0, 1, 2, 3] };

    pub fn new(translation: [i32; 4], perm: [u8; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &j in &perm {
            if j > 3 || std::mem::replace(&mut seen[j as usize], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 0..4")));
            }
        }
        Ok(Self { translation, perm })
    }

    pub fn translation(lambda: [i32; 4]) -> Self {
        Self { translation: lambda, ..Self::IDENTITY }
    }

    /// The simple affine reflection `s_i`; `s_0` is the reflection in `x1 - x4 = 1`.
    pub fn simple(i: usize) -> Self {
        match i {
            0 => Self { translation: [1, 0, 0, -1], perm: [3, 1, 2, 0] },
            1..=3 => {
                let mut perm = [0, 1, 2, 3];
                perm.swap(i - 1, i);
                Self { translation: [0; 4], perm }
            }
            _ => panic!("Ã_3 has nodes 0..=3"),
        }
    }

    /// The length-zero generator `x -> (x4 + 1, x1, x2, x3)` of `Ω`.
    pub fn rotation() -> Self {
        Self { translation: [1, 0, 0, 0], perm: [1, 2, 3, 0] }
    }

    pub fn translation_part(&self) -> [i32; 4] {
        self.translation
    }
    pub fn finite_part(&self) -> [u8; 4] {
        self.perm
    }

    /// The image of `Σλ` under `W̃ -> Ω ≅ Z`.
    pub fn degree(&self) -> i32 {
        self.translation.iter().sum()
    }

    fn permute<T: Copy + Default>(&self, x: [T; 4]) -> [T; 4] {
        let mut y = [T::default(); 4];
        for j in 0..4 {
            y[self.perm[j] as usize] = x[j];
        }
        y
    }

    /// `x -> w(x) + λ` on points scaled by `denom`.
    pub fn act(&self, x: [i64; 4], denom: i64) -> [i64; 4] {
        let y = self.permute(x);
        std::array::from_fn(|i| y[i] + denom * self.translation[i] as i64)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let moved = self.permute(other.translation);
        Self {
            translation: std::array::from_fn(|i| self.translation[i] + moved[i]),
            perm: other.perm.map(|j| self.perm[j as usize]),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0u8; 4];
        for j in 0..4 {
            inv[self.perm[j] as usize] = j as u8;
        }
        let w_inv = Self { translation: [0; 4], perm: inv };
        let t = w_inv.permute(self.translation).map(|v| -v);
        Self { translation: t, perm: inv }
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Self::IDENTITY, |acc, _| acc.mul(&base))
    }

    /// Number of affine root hyperplanes separating the base alcove from its image.
    pub fn length(&self) -> u32 {
        let y = self.act(GENERIC, GENERIC_DENOM);
        let mut len = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                len += (y[i] - y[j]).div_euclid(GENERIC_DENOM).unsigned_abs() as u32;
            }
        }
        len
    }

    pub fn is_left_descent(&self, i: usize) -> bool {
        Self::simple(i).mul(self).length() < self.length()
    }

    /// The `W_a`-part `w` in `x = w · ρ^{deg x}`.
    pub fn affine_part(&self) -> Self {
        self.mul(&Self::rotation().pow(-self.degree()))
    }

    /// A reduced word of the `W_a`-part, peeling the smallest left descent each time.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut x = self.affine_part();
        let mut word = Vec::new();
        while x.length() > 0 {
            let i = NODES.into_iter().find(|&i| x.is_left_descent(i)).expect("positive length has a descent");
            word.push(i);
            x = Self::simple(i).mul(&x);
        }
        word
    }

    /// Every reduced word of the `W_a`-part.
    pub fn reduced_words(&self) -> Vec<Vec<usize>> {
        let x = self.affine_part();
        if x.length() == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in NODES.into_iter().filter(|&i| x.is_left_descent(i)) {
            for mut tail in Self::simple(i).mul(&x).reduced_words() {
                tail.insert(0, i);
                out.push(tail);
            }
        }
        out.sort();
        out
    }

    /// Letters of a reduced word of the `W_a`-part.
    pub fn support(&self) -> BTreeSet<usize> {
        self.reduced_word().into_iter().collect()
    }

    /// `s_{i1} ... s_{ik} · ρ^d`.
    pub fn from_word(word: &[usize], degree: i32) -> Self {
        word.iter().fold(Self::IDENTITY, |acc, &i| acc.mul(&Self::simple(i))).mul(&Self::rotation().pow(degree))
    }

    /// Product form with the lexicographically least reduced word, e.g. `s0*s1*tau`.
    pub fn display_word(&self) -> String {
        let word = self.reduced_words().into_iter().next().unwrap_or_default();
        let mut parts: Vec<String> = word.iter().map(|i| format!("s{i}")).collect();
        match self.degree() {
            0 => {}
            1 => parts.push("rho".into()),
            2 => parts.push("tau".into()),
            d => parts.push(format!("rho^{d}")),
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Node permutation induced by conjugation, defined for length-zero elements.
    pub fn diagram_action(&self) -> Option<[usize; 4]> {
        if self.length() != 0 {
            return None;
        }
        let inv = self.inverse();
        let mut out = [0; 4];
        for i in NODES {
            let c = self.mul(&Self::simple(i)).mul(&inv);
            out[i] = NODES.into_iter().find(|&j| Self::simple(j) == c)?;
        }
        Some(out)
    }
}

/// The unique length-zero element of degree 2: the class of `μ = (1,1,0,0)` in `Ω`.
pub fn tau() -> AffineWeylElement {
    let mut found = Vec::new();
    for code in 0..5i32.pow(4) {
        let lambda: [i32; 4] = std::array::from_fn(|i| (code / 5i32.pow(i as u32)) % 5 - 2);
        if lambda.iter().sum::<i32>() != 2 {
            continue;
        }
        for perm in permutations() {
            let x = AffineWeylElement { translation: lambda, perm };
            if x.length() == 0 {
                found.push(x);
            }
        }
    }
    assert_eq!(found.len(), 1, "Ω has one element in each degree");
    found[0]
}

/// All of `S_4` in lexicographic order.
pub fn permutations() -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (0..i).all(|j| p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Bruhat order: equal degree and the `W_a`-part of `x` is a subword product of a fixed
/// reduced word of `y`.
pub fn bruhat_leq(x: &AffineWeylElement, y: &AffineWeylElement) -> bool {
    if x.degree() != y.degree() || x.length() > y.length() {
        return false;
    }
    subword_products(&y.reduced_word()).contains(&x.affine_part())
}

fn subword_products(word: &[usize]) -> BTreeSet<AffineWeylElement> {
    let mut out = BTreeSet::from([AffineWeylElement::IDENTITY]);
    for &i in word {
        let s = AffineWeylElement::simple(i);
        let extended: Vec<_> = out.iter().map(|x| x.mul(&s)).collect();
        out.extend(extended);
    }
    out
}

/// `{x : x ≤ y}` through the subword property on one reduced word of `y`.
pub fn lower_interval(y: &AffineWeylElement) -> BTreeSet<AffineWeylElement> {
    let omega = AffineWeylElement::rotation().pow(y.degree());
    subword_products(&y.reduced_word())
        .into_iter()
        .map(|w| w.mul(&omega))
        .collect()
}

pub const MU: [i32; 4] = [1, 1, 0, 0];

/// The six translations `t_{x(μ)}`.
pub fn mu_translations() -> Vec<AffineWeylElement> {
    let mut out: Vec<_> = permutations()
        .into_iter()
        .map(|p| AffineWeylElement::translation(AffineWeylElement { translation: [0; 4], perm: p }.permute(MU)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    out.sort();
    out
}

/// `Adm(μ)` as the union of lower Bruhat intervals below the translations.
pub fn adm() -> BTreeSet<AffineWeylElement> {
    mu_translations().iter().flat_map(lower_interval).collect()
}

/// `K = {1,2,3}`; `W_K` is the finite Weyl group `S_4`.
pub const K: [usize; 3] = [1, 2, 3];

/// Minimal length in its coset `W_K x`.
pub fn is_k_minimal(x: &AffineWeylElement) -> bool {
    K.iter().all(|&i| !x.is_left_descent(i))
}

fn finite_weyl_group() -> Vec<AffineWeylElement> {
    permutations().into_iter().map(|perm| AffineWeylElement { translation: [0; 4], perm }).collect()
}

/// `EO^K(μ)` read as `^K W̃ ∩ W_K Adm(μ) W_K`.
pub fn eo_set() -> BTreeSet<AffineWeylElement> {
    let wk = finite_weyl_group();
    let mut out = BTreeSet::new();
    for a in adm() {
        for u in &wk {
            for v in &wk {
                let x = u.mul(&a).mul(v);
                if is_k_minimal(&x) {
                    out.insert(x);
                }
            }
        }
    }
    out
}

/// `EO^K(μ)` read as `^K W̃ ∩ Adm(μ)`.
pub fn eo_set_left() -> BTreeSet<AffineWeylElement> {
    adm().into_iter().filter(is_k_minimal).collect()
}

/// The two Frobenius actions on the affine Dynkin diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `σ` acts trivially.
    Split,
    /// `σ` fixes 0 and 2 and swaps 1 and 3.
    Inert,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Split => "split",
            Case::Inert => "inert",
        }
    }

    pub fn sigma(self) -> [usize; 4] {
        match self {
            Case::Split => [0, 1, 2, 3],
            Case::Inert => [0, 3, 2, 1],
        }
    }

    /// The node map `τσ`.
    pub fn tau_sigma(self) -> [usize; 4] {
        let t = tau().diagram_action().expect("τ has length zero");
        self.sigma().map(|i| t[i])
    }
}

fn orbit_closure(set: &BTreeSet<usize>, action: [usize; 4]) -> BTreeSet<usize> {
    let mut out = set.clone();
    let mut queue: VecDeque<usize> = set.iter().copied().collect();
    while let Some(i) = queue.pop_front() {
        if out.insert(action[i]) {
            queue.push_back(action[i]);
        }
    }
    out
}

fn orbit_count(set: &BTreeSet<usize>, action: [usize; 4]) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &i in set {
        if seen.contains(&i) {
            continue;
        }
        count += 1;
        seen.extend(orbit_closure(&BTreeSet::from([i]), action));
    }
    count
}

/// `supp_σ(wτ)`: the support of `w` closed under `τσ`.
pub fn supp_sigma(x: &AffineWeylElement, case: Case) -> BTreeSet<usize> {
    orbit_closure(&x.support(), case.tau_sigma())
}

/// `ℓ(w)` equals the number of `τσ`-orbits on `supp_σ(wτ)`, which is not all of `S̃`.
pub fn is_sigma_coxeter(x: &AffineWeylElement, case: Case) -> bool {
    let supp = supp_sigma(x, case);
    supp.len() < 4 && x.length() as usize == orbit_count(&supp, case.tau_sigma())
}

/// The largest `J ⊆ K` with `x σ(J) x^{-1} = J` as sets of simple reflections.
pub fn stable_subset(x: &AffineWeylElement, case: Case) -> BTreeSet<usize> {
    let sigma = case.sigma();
    let inv = x.inverse();
    let image = |j: usize| {
        let c = x.mul(&AffineWeylElement::simple(sigma[j])).mul(&inv);
        NODES.into_iter().find(|&i| AffineWeylElement::simple(i) == c)
    };
    let mut j: BTreeSet<usize> = K.into_iter().collect();
    loop {
        let next: BTreeSet<usize> = j.iter().copied().filter(|&v| image(v).is_some_and(|i| j.contains(&i))).collect();
        if next == j {
            return j;
        }
        j = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterTableRow {
    pub sigma_set: Vec<usize>,
    pub w: String,
    pub complement: Vec<usize>,
    pub supp_sigma: Vec<usize>,
    #[serde(skip)]
    pub element: AffineWeylElement,
}

/// `EO^K_{σ,cox}(μ)` with the face type `Σ` of each element, where
/// `S̃ - Σ = supp_σ(w) ∪ I(K, wτ, σ)`.
pub fn coxeter_table(case: Case) -> Vec<CoxeterTableRow> {
    let mut rows: Vec<(u32, Vec<usize>, CoxeterTableRow)> = eo_set()
        .into_iter()
        .filter(|x| is_sigma_coxeter(x, case))
        .map(|x| {
            let supp = supp_sigma(&x, case);
            let complement: BTreeSet<usize> = supp.union(&stable_subset(&x, case)).copied().collect();
            let sigma_set = NODES.into_iter().filter(|i| !complement.contains(i)).collect();
            let word = x.reduced_words().into_iter().next().unwrap_or_default();
            let row = CoxeterTableRow {
                sigma_set,
                w: x.display_word(),
                complement: complement.into_iter().collect(),
                supp_sigma: supp.into_iter().collect(),
                element: x,
            };
            (x.length(), word, row)
        })
        .collect();
    rows.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    rows.into_iter().map(|r| r.2).collect()
}

/// Distance from a node to node 0 (the node outside `K`) in the 4-cycle.
pub fn distance_to_excluded(v: usize) -> usize {
    v.min(4 - v)
}

/// The index set `J`: nonempty `τσ`-stable subsets on which the distance to node 0 is constant.
pub fn j_set(case: Case) -> Vec<Vec<usize>> {
    let action = case.tau_sigma();
    (1u8..16)
        .map(|mask| NODES.into_iter().filter(|&i| mask >> i & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|s| s.iter().all(|&i| s.contains(&action[i])))
        .filter(|s| s.iter().map(|&v| distance_to_excluded(v)).collect::<BTreeSet<_>>().len() == 1)
        .map(|s| s.into_iter().collect())
        .collect()
}

/// Table rows whose `Σ` is not in the index set `J`.
pub fn j_set_discrepancies(case: Case) -> Vec<Vec<usize>> {
    let j = j_set(case);
    coxeter_table(case).into_iter().map(|r| r.sigma_set).filter(|s| !j.contains(s)).collect()
}

/// Word length in `W_a` by breadth-first search, for every element up to `max_len`.
pub fn bfs_word_lengths(max_len: u32) -> BTreeMap<AffineWeylElement, u32> {
    let mut dist = BTreeMap::from([(AffineWeylElement::IDENTITY, 0)]);
    let mut queue = VecDeque::from([AffineWeylElement::IDENTITY]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == max_len {
            continue;
        }
        for i in NODES {
            let y = x.mul(&AffineWeylElement::simple(i));
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// `{x ≤ y}` as the closure of `y` under deleting one letter from a reduced word while the
/// length drops by one.
pub fn deletion_closure(y: &AffineWeylElement) -> BTreeSet<AffineWeylElement> {
    let mut out = BTreeSet::from([*y]);
    let mut queue = VecDeque::from([*y]);
    while let Some(z) = queue.pop_front() {
        let word = z.reduced_word();
        for k in 0..word.len() {
            let mut shorter = word.clone();
            shorter.remove(k);
            let c = AffineWeylElement::from_word(&shorter, z.degree());
            if c.length() + 1 == z.length() && out.insert(c) {
                queue.push_back(c);
            }
        }
    }
    out
}

/// Degree-2 elements moving every vertex of the base alcove by a vector of
/// `conv(S_4 μ) = {y ∈ [0,1]^4 : Σy = 2}`.
pub fn permissible_set() -> BTreeSet<AffineWeylElement> {
    const VERTICES: [[i64; 4]; 4] = [[0, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0]];
    let mut out = BTreeSet::new();
    for code in 0..16u32 {
        let lambda: [i32; 4] = std::array::from_fn(|i| (code >> i & 1) as i32);
        if lambda.iter().sum::<i32>() != 2 {
            continue;
        }
        for perm in permutations() {
            let x = AffineWeylElement { translation: lambda, perm };
            let ok = VERTICES.iter().all(|v| {
                let y = x.act(*v, 1);
                (0..4).all(|i| (0..=1).contains(&(y[i] - v[i])))
            });
            if ok {
                out.insert(x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_up_to(len: u32) -> Vec<AffineWeylElement> {
        let rho = AffineWeylElement::rotation();
        bfs_word_lengths(len).into_keys().flat_map(|w| (0..4).map(move |d| w.mul(&rho.pow(d)))).collect()
    }

    #[test]
    fn simple_reflections_are_involutions_of_length_one() {
        for i in NODES {
            let s = AffineWeylElement::simple(i);
            assert_eq!(s.mul(&s), AffineWeylElement::IDENTITY);
            assert_eq!(s.length(), 1);
        }
        // braid relations on the 4-cycle
        for i in NODES {
            let (a, b) = (AffineWeylElement::simple(i), AffineWeylElement::simple((i + 1) % 4));
            assert_eq!(a.mul(&b).mul(&a), b.mul(&a).mul(&b));
            let c = AffineWeylElement::simple((i + 2) % 4);
            assert_eq!(a.mul(&c), c.mul(&a));
        }
    }

    #[test]
    fn tau_has_length_zero_and_rotates_by_two() {
        let t = tau();
        assert_eq!(t.length(), 0);
        assert_eq!(t.degree(), 2);
        assert_eq!(t, AffineWeylElement::rotation().pow(2));
        assert_eq!(t.diagram_action(), Some([2, 3, 0, 1]));
        assert_eq!(AffineWeylElement::rotation().diagram_action(), Some([1, 2, 3, 0]));
        assert_eq!(AffineWeylElement::simple(0).mul(&t).length(), 1);
    }

    #[test]
    fn translation_length() {
        assert_eq!(AffineWeylElement::translation(MU).length(), 4);
        assert_eq!(AffineWeylElement::translation([1, 0, 0, -1]).length(), 6);
    }

    #[test]
    fn length_matches_word_length() {
        let bfs = bfs_word_lengths(6);
        let rho = AffineWeylElement::rotation();
        for (w, &d) in &bfs {
            for k in -2..3 {
                assert_eq!(w.mul(&rho.pow(k)).length(), d, "{w:?}");
            }
            assert_eq!(w.reduced_word().len() as u32, d);
        }
    }

    #[test]
    fn group_law() {
        let xs = all_up_to(3);
        for x in xs.iter().step_by(7) {
            assert_eq!(x.mul(&x.inverse()), AffineWeylElement::IDENTITY);
            for y in xs.iter().step_by(11) {
                assert_eq!(x.mul(y).degree(), x.degree() + y.degree());
                assert_eq!(x.mul(y).inverse(), y.inverse().mul(&x.inverse()));
            }
        }
    }

    #[test]
    fn bruhat_matches_deletion_closure() {
        let xs = all_up_to(4);
        for y in &xs {
            let below = deletion_closure(y);
            for x in &xs {
                assert_eq!(bruhat_leq(x, y), below.contains(x), "{x:?} <= {y:?}");
            }
        }
    }

    #[test]
    fn support_is_independent_of_reduced_word() {
        for x in all_up_to(5) {
            let words = x.reduced_words();
            let supp = x.support();
            for w in &words {
                assert_eq!(w.iter().copied().collect::<BTreeSet<_>>(), supp);
                assert_eq!(AffineWeylElement::from_word(w, x.degree()), x);
            }
        }
    }

    #[test]
    fn admissible_set_two_ways() {
        let a = adm();
        assert_eq!(a, permissible_set());
        assert_eq!(a.len(), 33);
        assert!(a.contains(&tau()));
        assert!(a.iter().all(|x| x.degree() == 2));
        for t in mu_translations() {
            assert!(a.contains(&t));
        }
    }

    #[test]
    fn eo_readings_agree() {
        let eo = eo_set();
        assert_eq!(eo, eo_set_left());
        assert!(eo.contains(&tau()));
        assert!(eo.contains(&AffineWeylElement::simple(0).mul(&tau())));
        for x in &eo {
            assert!(x.reduced_words().iter().all(|w| w.first().is_none_or(|&i| i == 0)));
        }
    }

    #[test]
    fn sigma_coxeter_examples() {
        let t = tau();
        let s = AffineWeylElement::simple;
        assert!(is_sigma_coxeter(&t, Case::Inert));
        assert!(is_sigma_coxeter(&s(0).mul(&s(1)).mul(&t), Case::Inert));
        assert!(!is_sigma_coxeter(&s(0).mul(&s(2)).mul(&t), Case::Inert));
        assert_eq!(supp_sigma(&s(0).mul(&t), Case::Inert), BTreeSet::from([0, 2]));
        assert_eq!(Case::Inert.tau_sigma(), [2, 1, 0, 3]);
        assert_eq!(Case::Split.tau_sigma(), [2, 3, 0, 1]);
    }

    #[test]
    fn j_set_misses_the_superspecial_row() {
        assert_eq!(j_set(Case::Split), vec![vec![1, 3]]);
        assert_eq!(j_set_discrepancies(Case::Split), vec![vec![0, 2]]);
        assert_eq!(j_set_discrepancies(Case::Inert), vec![vec![0, 2]]);
    }
}
