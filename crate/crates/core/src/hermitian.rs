//! Hermitian spaces over `F_{p^2}` viewed over `F_{p^{2m}}`, the Fermat varieties
//! `Y^(-)` (hyperplanes containing their orthogonal) and `Y^(+)` (isotropic lines),
//! and the Deligne-Lusztig labels of their points.
//!
//! The form is `form(x, y) = sum x_i G_ij sigma(y_j)`, linear in the first slot.
//! `perp` is taken in the second slot; on a hyperplane or a line the choice of slot
//! does not change membership in `Y^(-)` / `Y^(+)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::par;

/// A subspace of `F^n`, held in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<FieldElem>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, rows: Vec::new() }
    }

    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<FieldElem>]) -> Self {
        rref(field, ambient, vectors.iter().flat_map(|v| v.iter().copied()).collect())
    }

    pub fn dim(&self) -> usize {
        self.rows.len() / self.ambient.max(1)
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn basis(&self) -> impl Iterator<Item = &[FieldElem]> {
        self.rows.chunks(self.ambient)
    }
    pub fn basis_vecs(&self) -> Vec<Vec<FieldElem>> {
        self.basis().map(|r| r.to_vec()).collect()
    }

    /// Entrywise field automorphism; RREF is preserved since pivots are 1.
    pub fn map(&self, f: impl Fn(FieldElem) -> FieldElem) -> Self {
        Self { ambient: self.ambient, rows: self.rows.iter().map(|&x| f(x)).collect() }
    }

    pub fn join(&self, field: &Field, other: &Subspace) -> Self {
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        rref(field, self.ambient, rows)
    }

    /// Bilinear annihilator `{z : sum u_i z_i = 0 for u in self}`.
    pub fn annihilator(&self, field: &Field) -> Self {
        let n = self.ambient;
        let pivots = self.pivots();
        let mut out = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![FieldElem::ZERO; n];
            v[free] = FieldElem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(self.rows[r * n + free]);
            }
            out.extend(v);
        }
        rref(field, n, out)
    }

    pub fn meet(&self, field: &Field, other: &Subspace) -> Self {
        self.annihilator(field).join(field, &other.annihilator(field)).annihilator(field)
    }

    pub fn contains(&self, field: &Field, other: &Subspace) -> bool {
        self.join(field, other).dim() == self.dim()
    }

    pub fn contains_vector(&self, field: &Field, v: &[FieldElem]) -> bool {
        self.join(field, &Subspace::span(field, self.ambient, &[v.to_vec()])).dim() == self.dim()
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis().map(|r| r.iter().position(|x| !x.is_zero()).unwrap_or(0)).collect()
    }
}

fn rref(field: &Field, n: usize, mut m: Vec<FieldElem>) -> Subspace {
    let nrows = if n == 0 { 0 } else { m.len() / n };
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..nrows).find(|&r| !m[r * n + col].is_zero()) else {
            continue;
        };
        for j in 0..n {
            m.swap(rank * n + j, piv * n + j);
        }
        let inv = field.inv(m[rank * n + col]).expect("nonzero pivot");
        for j in 0..n {
            m[rank * n + j] = field.mul(m[rank * n + j], inv);
        }
        for r in 0..nrows {
            if r == rank {
                continue;
            }
            let c = m[r * n + col];
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = field.mul(c, m[rank * n + j]);
                m[r * n + j] = field.sub(m[r * n + j], t);
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    m.truncate(rank * n);
    Subspace { ambient: n, rows: m }
}

/// Deligne-Lusztig label of a point of `Y^(-)` or `Y^(+)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DlLabel {
    Unit,
    W1,
    W2,
}

impl DlLabel {
    pub const ALL: [DlLabel; 3] = [DlLabel::Unit, DlLabel::W1, DlLabel::W2];

    pub fn name(self) -> &'static str {
        match self {
            DlLabel::Unit => "unit",
            DlLabel::W1 => "w1",
            DlLabel::W2 => "w2",
        }
    }
}

impl fmt::Display for DlLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which Fermat variety of a 4-dimensional hermitian space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

/// Counts per label, every label present.
pub fn tally(labels: impl IntoIterator<Item = DlLabel>) -> BTreeMap<DlLabel, usize> {
    let mut out: BTreeMap<DlLabel, usize> = DlLabel::ALL.iter().map(|&l| (l, 0)).collect();
    for l in labels {
        *out.entry(l).or_default() += 1;
    }
    out
}

/// A non-degenerate hermitian space with `F_{p^2}`-rational Gram matrix.
pub struct HermSpace {
    field: Arc<Field>,
    dim: usize,
    gram: Vec<FieldElem>,
    /// Rows `b_i` of an orthonormal rational basis: `form(b_i, b_j) = delta_ij`.
    orthonormal: Vec<FieldElem>,
}

impl fmt::Debug for HermSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermSpace").field("dim", &self.dim).field("gram", &self.gram).finish()
    }
}

impl HermSpace {
    pub fn standard(field: Arc<Field>, dim: usize) -> Self {
        let mut id = vec![FieldElem::ZERO; dim * dim];
        for i in 0..dim {
            id[i * dim + i] = FieldElem::ONE;
        }
        Self { field, dim, gram: id.clone(), orthonormal: id }
    }

    /// `gram` is row-major, must satisfy `G_ji = sigma(G_ij)` with entries in `F_{p^2}`.
    pub fn with_gram(field: Arc<Field>, dim: usize, gram: Vec<FieldElem>) -> Result<Self> {
        if gram.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: gram.len() });
        }
        for i in 0..dim {
            for j in 0..dim {
                let g = gram[i * dim + j];
                if !field.in_subfield(g, 2) || gram[j * dim + i] != field.sigma(g) {
                    return Err(Error::NotHermitian);
                }
            }
        }
        let mut space = Self { field, dim, gram, orthonormal: Vec::new() };
        space.orthonormal = space.orthonormalize()?;
        Ok(space)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn gram(&self) -> &[FieldElem] {
        &self.gram
    }

    pub fn form(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        let f = &*self.field;
        let n = self.dim;
        let mut acc = FieldElem::ZERO;
        for j in 0..n {
            let sy = f.sigma(y[j]);
            if sy.is_zero() {
                continue;
            }
            let mut col = FieldElem::ZERO;
            for i in 0..n {
                col = f.add(col, f.mul(x[i], self.gram[i * n + j]));
            }
            acc = f.add(acc, f.mul(col, sy));
        }
        acc
    }

    fn orthonormalize(&self) -> Result<Vec<FieldElem>> {
        let f = &*self.field;
        let n = self.dim;
        let rational: Vec<FieldElem> = f.elements().filter(|&c| f.in_subfield(c, 2)).collect();
        let mut pool: Vec<Vec<FieldElem>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { FieldElem::ONE } else { FieldElem::ZERO }).collect())
            .collect();
        let mut out = Vec::with_capacity(n * n);
        while !pool.is_empty() {
            let pick = pool.iter().position(|v| !self.form(v, v).is_zero());
            let idx = match pick {
                Some(i) => i,
                None => {
                    let mut found = None;
                    'search: for i in 0..pool.len() {
                        for j in 0..pool.len() {
                            if i == j || self.form(&pool[i], &pool[j]).is_zero() {
                                continue;
                            }
                            for &c in &rational {
                                let w: Vec<FieldElem> =
                                    pool[i].iter().zip(&pool[j]).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect();
                                if !self.form(&w, &w).is_zero() {
                                    pool[i] = w;
                                    found = Some(i);
                                    break 'search;
                                }
                            }
                        }
                    }
                    found.ok_or(Error::DegenerateForm)?
                }
            };
            let v = pool.swap_remove(idx);
            let a = self.form(&v, &v);
            let target = f.inv(a).ok_or(Error::DegenerateForm)?;
            let c = rational
                .iter()
                .copied()
                .find(|&c| f.mul(c, f.sigma(c)) == target)
                .ok_or(Error::DegenerateForm)?;
            let e: Vec<FieldElem> = v.iter().map(|&x| f.mul(c, x)).collect();
            for b in pool.iter_mut() {
                let t = self.form(b, &e);
                for (bi, &ei) in b.iter_mut().zip(&e) {
                    *bi = f.sub(*bi, f.mul(t, ei));
                }
            }
            out.extend(e);
        }
        Ok(out)
    }

    /// Coordinates in an orthonormal model to coordinates here.
    fn from_orthonormal(&self, y: &[FieldElem]) -> Vec<FieldElem> {
        let f = &*self.field;
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).fold(FieldElem::ZERO, |acc, i| f.add(acc, f.mul(y[i], self.orthonormal[i * n + j]))))
            .collect()
    }

    pub fn span(&self, vectors: &[Vec<FieldElem>]) -> Subspace {
        Subspace::span(&self.field, self.dim, vectors)
    }

    pub fn tau(&self, u: &Subspace) -> Subspace {
        u.map(|x| self.field.tau(x))
    }

    /// `{y : form(u, y) = 0 for u in U}`. Applying it twice gives `tau^{-1}`.
    pub fn perp(&self, u: &Subspace) -> Subspace {
        let f = &*self.field;
        let n = self.dim;
        let ug: Vec<Vec<FieldElem>> = u
            .basis()
            .map(|r| {
                (0..n)
                    .map(|j| (0..n).fold(FieldElem::ZERO, |acc, i| f.add(acc, f.mul(r[i], self.gram[i * n + j]))))
                    .collect()
            })
            .collect();
        Subspace::span(f, n, &ug).annihilator(f).map(|x| f.sigma_inv(x))
    }

    /// `{x : form(x, u) = 0 for u in U}`.
    pub fn perp_first(&self, u: &Subspace) -> Subspace {
        let f = &*self.field;
        let n = self.dim;
        let gu: Vec<Vec<FieldElem>> = u
            .basis()
            .map(|r| {
                (0..n)
                    .map(|i| (0..n).fold(FieldElem::ZERO, |acc, j| f.add(acc, f.mul(self.gram[i * n + j], f.sigma(r[j])))))
                    .collect()
            })
            .collect();
        Subspace::span(f, n, &gu).annihilator(f)
    }

    pub fn is_isotropic(&self, u: &Subspace) -> bool {
        let b = u.basis_vecs();
        b.iter().all(|x| b.iter().all(|y| self.form(x, y).is_zero()))
    }

    pub fn in_y_minus(&self, u: &Subspace) -> bool {
        u.dim() + 1 == self.dim && u.contains(&self.field, &self.perp(u))
    }

    pub fn in_y_plus(&self, u: &Subspace) -> bool {
        u.dim() == 1 && self.perp(u).contains(&self.field, u)
    }

    pub fn classify_minus(&self, u: &Subspace) -> Result<DlLabel> {
        if !self.in_y_minus(u) {
            return Err(Error::NotInVariety("Y^(-)"));
        }
        let f = &*self.field;
        let tu = self.tau(u);
        if tu == *u {
            return Ok(DlLabel::Unit);
        }
        let i = u.meet(f, &tu);
        Ok(if self.tau(&i) == i { DlLabel::W1 } else { DlLabel::W2 })
    }

    pub fn classify_plus(&self, u: &Subspace) -> Result<DlLabel> {
        if !self.in_y_plus(u) {
            return Err(Error::NotInVariety("Y^(+)"));
        }
        self.classify_minus(&self.perp(u))
    }

    pub fn classify(&self, side: Side, u: &Subspace) -> Result<DlLabel> {
        match side {
            Side::Minus => self.classify_minus(u),
            Side::Plus => self.classify_plus(u),
        }
    }

    /// All isotropic lines, each as a normalized spanning vector (first nonzero entry 1),
    /// in lexicographic order of those vectors.
    pub fn isotropic_vectors(&self) -> Vec<Vec<FieldElem>> {
        let f = &*self.field;
        let n = self.dim;
        let q = f.order() as usize;
        let mut fibers: Vec<Vec<FieldElem>> = vec![Vec::new(); q];
        for x in f.elements() {
            fibers[f.norm_p1(x).index() as usize].push(x);
        }
        let norms: Vec<FieldElem> = f.elements().map(|x| f.norm_p1(x)).collect();

        // Tasks: (leading position, value of the first free coordinate when there is one).
        let mut tasks: Vec<(usize, Option<FieldElem>)> = Vec::new();
        for lead in 0..n {
            if lead + 1 < n {
                tasks.extend(f.elements().map(|x| (lead, Some(x))));
            } else {
                tasks.push((lead, None));
            }
        }
        let chunks = par::map(&tasks, |&(lead, first)| {
            let mut out = Vec::new();
            let free = n - lead - 1;
            let mut y = vec![FieldElem::ZERO; n];
            y[lead] = FieldElem::ONE;
            let Some(first) = first else { return out };
            y[lead + 1] = first;
            let base = f.add(FieldElem::ONE, norms[first.index() as usize]);
            if free == 1 {
                if base.is_zero() {
                    out.push(y.clone());
                }
                return out;
            }
            // Odometer over the middle coordinates; the last one comes from the norm fibers.
            let middle = free - 2;
            let mut idx = vec![0u32; middle];
            loop {
                let mut s = base;
                for (k, &v) in idx.iter().enumerate() {
                    y[lead + 2 + k] = FieldElem::from_index(v);
                    s = f.add(s, norms[v as usize]);
                }
                for &last in &fibers[f.neg(s).index() as usize] {
                    y[n - 1] = last;
                    out.push(y.clone());
                }
                let mut k = middle;
                loop {
                    if k == 0 {
                        return out;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if (idx[k] as usize) < q {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        });
        let mut lines: Vec<Vec<FieldElem>> = chunks.into_iter().flatten().map(|y| self.from_orthonormal(&y)).collect();
        for v in lines.iter_mut() {
            let lead = v.iter().copied().find(|x| !x.is_zero()).expect("nonzero");
            let inv = f.inv(lead).expect("nonzero");
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        lines.sort_unstable();
        lines
    }

    /// `Y^(+)`: the isotropic lines.
    pub fn y_plus(&self) -> Vec<Subspace> {
        self.isotropic_vectors().into_iter().map(|v| self.span(&[v])).collect()
    }

    /// `Y^(-)`: orthogonals of isotropic lines, sorted.
    pub fn y_minus(&self) -> Vec<Subspace> {
        let lines = self.y_plus();
        let mut out = par::map(&lines, |l| self.perp(l));
        out.sort_unstable();
        out
    }

    pub fn points(&self, side: Side) -> Vec<Subspace> {
        match side {
            Side::Minus => self.y_minus(),
            Side::Plus => self.y_plus(),
        }
    }

    /// Isotropic planes fixed by `tau`, as spans of orthogonal rational isotropic lines.
    pub fn rational_isotropic_planes(&self) -> Vec<Subspace> {
        let f = &*self.field;
        let rational: Vec<Vec<FieldElem>> = self
            .isotropic_vectors()
            .into_iter()
            .filter(|v| v.iter().all(|&x| f.in_subfield(x, 2)))
            .collect();
        let mut planes = std::collections::BTreeSet::new();
        for (i, a) in rational.iter().enumerate() {
            for b in &rational[i + 1..] {
                if self.form(a, b).is_zero() {
                    planes.insert(self.span(&[a.clone(), b.clone()]));
                }
            }
        }
        planes.into_iter().collect()
    }
}

/// `P^1(F_{p^{2m}})` as normalized vectors, flagged by whether the line is `tau`-fixed.
pub fn p1_points(field: &Field) -> Vec<([FieldElem; 2], bool)> {
    let mut out: Vec<([FieldElem; 2], bool)> =
        field.elements().map(|x| ([FieldElem::ONE, x], field.in_subfield(x, 2))).collect();
    out.push(([FieldElem::ZERO, FieldElem::ONE], true));
    out
}

/// Representatives of the `F_{p^2}`-rational lines of `F^k`, first nonzero entry 1.
pub fn rational_lines(field: &Field, k: usize) -> Vec<Vec<FieldElem>> {
    let rational: Vec<FieldElem> = field.elements().filter(|&x| field.in_subfield(x, 2)).collect();
    lines_with_entries(&rational, k)
}

/// Representatives of all lines of `F^k`, first nonzero entry 1.
pub fn projective_points(field: &Field, k: usize) -> Vec<Vec<FieldElem>> {
    let all: Vec<FieldElem> = field.elements().collect();
    lines_with_entries(&all, k)
}

/// The `index`-th entry of [`projective_points`], decoded without building the list.
pub fn projective_point(field: &Field, k: usize, mut index: u128) -> Option<Vec<FieldElem>> {
    let r = field.order() as u128;
    for lead in (0..k).rev() {
        let block = r.pow((k - lead - 1) as u32);
        if index < block {
            let mut v = vec![FieldElem::ZERO; k];
            v[lead] = FieldElem::ONE;
            for slot in v.iter_mut().skip(lead + 1).rev() {
                *slot = field.elem((index % r) as u32)?;
                index /= r;
            }
            return Some(v);
        }
        index -= block;
    }
    None
}

fn lines_with_entries(entries: &[FieldElem], k: usize) -> Vec<Vec<FieldElem>> {
    let r = entries.len();
    let mut out = Vec::new();
    for lead in (0..k).rev() {
        let free = k - lead - 1;
        for mut code in 0..r.pow(free as u32) {
            let mut v = vec![FieldElem::ZERO; k];
            v[lead] = FieldElem::ONE;
            for slot in v.iter_mut().skip(lead + 1).rev() {
                *slot = entries[code % r];
                code /= r;
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn projective_points_count_and_decode() {
        let f = Field::new(3, 1).unwrap();
        let all = projective_points(&f, 3);
        assert_eq!(all.len(), 81 + 9 + 1);
        for (i, v) in all.iter().enumerate() {
            assert_eq!(projective_point(&f, 3, i as u128).as_ref(), Some(v));
        }
        assert_eq!(projective_point(&f, 3, all.len() as u128), None);
        let distinct: std::collections::BTreeSet<Subspace> =
            all.iter().map(|v| Subspace::span(&f, 3, std::slice::from_ref(v))).collect();
        assert_eq!(distinct.len(), all.len());
    }

    fn space(p: u32, m: u32) -> HermSpace {
        HermSpace::standard(Arc::new(Field::new(p, m).unwrap()), 4)
    }

    fn brute_fermat_count(f: &Field, n: usize) -> usize {
        // every nonzero vector, then divide by q - 1
        let q = f.order() as usize;
        let mut count = 0usize;
        let mut v = vec![0usize; n];
        loop {
            let s = v
                .iter()
                .fold(FieldElem::ZERO, |acc, &x| f.add(acc, f.norm_p1(f.elem(x as u32).unwrap())));
            if s.is_zero() && v.iter().any(|&x| x != 0) {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return count / (q - 1);
                }
                v[k] += 1;
                if v[k] < q {
                    break;
                }
                v[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn isotropic_line_count_matches_brute_force() {
        let s = space(3, 1);
        assert_eq!(s.isotropic_vectors().len(), brute_fermat_count(s.field(), 4));
        assert_eq!(s.isotropic_vectors().len(), 280);
        let s2 = HermSpace::standard(Arc::new(Field::new(3, 1).unwrap()), 2);
        assert_eq!(s2.isotropic_vectors().len(), 4);
    }

    #[test]
    fn perp_twice_is_tau_inverse() {
        let s = space(3, 2);
        for l in s.y_plus().iter().step_by(97) {
            assert_eq!(s.tau(&s.perp(&s.perp(l))), *l);
            assert_eq!(s.perp_first(&s.perp_first(l)), s.tau(l));
        }
    }

    #[test]
    fn slot_choice_does_not_change_varieties() {
        let s = space(3, 2);
        for u in s.y_minus().iter().step_by(53) {
            assert!(u.contains(s.field(), &s.perp_first(u)));
        }
    }

    #[test]
    fn minus_and_plus_labels_agree_on_both_descriptions() {
        let s = space(3, 2);
        let f = s.field().clone();
        for l in s.y_plus() {
            let label = s.classify_plus(&l).unwrap();
            let tl = s.tau(&l);
            let sum = l.join(&f, &tl);
            let alt = if tl == l {
                DlLabel::Unit
            } else if s.tau(&sum) == sum {
                DlLabel::W1
            } else {
                DlLabel::W2
            };
            assert_eq!(label, alt);
        }
    }

    #[test]
    fn w1_intersection_is_self_orthogonal() {
        let s = space(3, 2);
        let f = s.field().clone();
        for u in s.y_minus() {
            if s.classify_minus(&u).unwrap() == DlLabel::W1 {
                let i = u.meet(&f, &s.tau(&u));
                assert_eq!(i.dim(), 2);
                assert_eq!(s.perp(&i), i);
            }
        }
    }

    #[test]
    fn planes_have_q_plus_one_hyperplanes() {
        let s = space(3, 1);
        let f = s.field().clone();
        let planes = s.rational_isotropic_planes();
        assert_eq!(planes.len(), 112);
        let ym = s.y_minus();
        for w in planes.iter().take(5) {
            let over: Vec<&Subspace> = ym.iter().filter(|u| u.contains(&f, w)).collect();
            assert_eq!(over.len(), f.order() as usize + 1);
        }
    }

    #[test]
    fn general_gram_matches_brute_force() {
        let f = Arc::new(Field::new(3, 1).unwrap());
        // hyperbolic planes: [[0,1],[1,0]] twice
        let mut g = vec![FieldElem::ZERO; 16];
        for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            g[i * 4 + j] = FieldElem::ONE;
        }
        let s = HermSpace::with_gram(f.clone(), 4, g).unwrap();
        let lines = s.isotropic_vectors();
        assert_eq!(lines.len(), 280);
        for v in &lines {
            assert!(s.form(v, v).is_zero());
        }
        let mut dedup = lines.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), lines.len());
    }

    #[test]
    fn rejects_non_hermitian() {
        let f = Arc::new(Field::new(3, 1).unwrap());
        let mut g = vec![FieldElem::ZERO; 4];
        g[1] = f.generator();
        g[2] = f.generator();
        assert_eq!(HermSpace::with_gram(f, 2, g).unwrap_err(), Error::NotHermitian);
    }

    #[test]
    fn classify_rejects_non_members() {
        let s = space(3, 1);
        let e0 = vec![FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO];
        let line = s.span(&[e0]);
        assert_eq!(s.classify_plus(&line).unwrap_err(), Error::NotInVariety("Y^(+)"));
        assert!(s.classify_minus(&s.perp(&line)).is_err());
    }

    #[test]
    fn rational_line_counts() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(rational_lines(&f, 4).len(), 820);
        assert_eq!(rational_lines(&f, 2).len(), 10);
        assert_eq!(rational_lines(&f, 1).len(), 1);
    }

    #[test]
    fn p1_counts() {
        let f = Field::new(3, 2).unwrap();
        let pts = p1_points(&f);
        assert_eq!(pts.len(), 82);
        assert_eq!(pts.iter().filter(|p| p.1).count(), 10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn labels_are_tau_equivariant(i in 0usize..8344) {
            let s = space(3, 2);
            let ym = s.y_minus();
            let u = &ym[i % ym.len()];
            prop_assert_eq!(s.classify_minus(u).unwrap(), s.classify_minus(&s.tau(u)).unwrap());
        }
    }
}
