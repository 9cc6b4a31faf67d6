//! The inert case: points `pD^v ⊂² D ⊂² D^v` of volume 1, vertex lattices of types
//! 1, 02 and 3, their hulls, and the Deligne-Lusztig models of the closed strata.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::hermitian::{projective_point, rational_lines, HermSpace, Side, Subspace};

use super::{LatticeSpace, Quotient, SubfieldEmbedding, WindowLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VertexType {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "02")]
    ZeroTwo,
    #[serde(rename = "3")]
    Three,
}

impl VertexType {
    pub fn name(self) -> &'static str {
        match self {
            VertexType::One => "1",
            VertexType::ZeroTwo => "02",
            VertexType::Three => "3",
        }
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a point sits in the stratification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HullStratum {
    /// `tau D = D`: the point is a type-02 lattice.
    Superspecial,
    /// In both a type-1 and a type-3 stratum.
    Edge13,
    /// Only in the stratum of `D + tau D`.
    Open1,
    /// Only in the stratum of `D ∩ tau D`.
    Open3,
}

#[derive(Clone, Debug)]
pub struct VertexHull {
    /// `D + tau D` when it is `tau`-stable (a type-1 lattice).
    pub sum: Option<WindowLattice>,
    /// `D ∩ tau D` when it is `tau`-stable (a type-3 lattice).
    pub intersection: Option<WindowLattice>,
    pub stratum: HullStratum,
}

impl VertexHull {
    /// The smallest vertex lattice structure attached to `D`: the sum branch when it applies.
    pub fn branch(&self) -> &'static str {
        match (&self.sum, &self.intersection) {
            (Some(_), _) if self.stratum != HullStratum::Superspecial => "sum",
            (None, Some(_)) => "intersection",
            _ => "self",
        }
    }
}

/// Vertex lattices of the window and the incidence edges between type 02 and types 1, 3.
#[derive(Clone, Debug)]
pub struct VertexComplex {
    pub nodes: Vec<(WindowLattice, VertexType)>,
    pub edges: Vec<(usize, usize)>,
}

impl VertexComplex {
    pub fn of_type(&self, kind: VertexType) -> impl Iterator<Item = (usize, &WindowLattice)> {
        self.nodes.iter().enumerate().filter(move |(_, (_, t))| *t == kind).map(|(i, (l, _))| (i, l))
    }

    pub fn count(&self, kind: VertexType) -> usize {
        self.of_type(kind).count()
    }

    /// Neighbours of each node.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }
}

/// How `enumerate_rz_points` searches a lattice stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSearch {
    /// Preimages of the points of the Fermat model.
    Model,
    /// Every colength-one candidate of the finite quotient, filtered by the point conditions.
    Scan,
}

/// Largest number of candidates a scan may visit.
pub const SCAN_BOUND: usize = 1 << 20;

/// A vertex lattice with its stratum modelled on a Fermat variety.
pub struct StratumModel {
    pub vertex: WindowLattice,
    pub kind: VertexType,
    pub quotient: Quotient,
    pub herm: HermSpace,
    pub side: Side,
}

impl StratumModel {
    pub fn point(&self, space: &LatticeSpace, u: &Subspace) -> WindowLattice {
        self.quotient.preimage(space, u)
    }

    pub fn subspace_of(&self, space: &LatticeSpace, d: &WindowLattice) -> Result<Subspace> {
        self.quotient.image(space, d)
    }

    /// All points of the stratum with their subspaces, ordered by subspace.
    pub fn points(&self, space: &LatticeSpace) -> Vec<(Subspace, WindowLattice)> {
        let subs = self.herm.points(self.side);
        crate::par::map(&subs, |u| (u.clone(), self.point(space, u)))
    }
}

impl LatticeSpace {
    /// `pD^v ⊂² D ⊂² D^v` with `vol(D) = 1`; `strict_tau` adds `tau D ⊆ D^v` and `pD^v ⊆ tau D`.
    pub fn is_rz_point(&self, d: &WindowLattice, strict_tau: bool) -> Result<bool> {
        let Some((dv, pdv)) = self.rz_duals(d)? else { return Ok(false) };
        if strict_tau {
            let td = self.tau(d);
            if !self.contains(&dv, &td) || !self.contains(&td, &pdv) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(D^v, pD^v)` when the colength conditions hold.
    fn rz_duals(&self, d: &WindowLattice) -> Result<Option<(WindowLattice, WindowLattice)>> {
        if self.vol(d) != 1 {
            return Ok(None);
        }
        let dv = self.dual(d);
        let pdv = self.scale(&dv, 1)?;
        let ok = self.colength(&pdv, d) == Some(2) && self.colength(d, &dv) == Some(2);
        Ok(ok.then_some((dv, pdv)))
    }

    pub fn vertex_type(&self, l: &WindowLattice) -> Result<VertexType> {
        self.typed_dual(l).map(|(t, _)| t)
    }

    fn typed_dual(&self, l: &WindowLattice) -> Result<(VertexType, WindowLattice)> {
        if !self.is_tau_stable(l) {
            return Err(Error::NotVertexLattice("not tau-stable"));
        }
        let lv = self.dual(l);
        let plv = self.scale(&lv, 1)?;
        if !self.contains(l, &plv) {
            return Err(Error::NotVertexLattice("pL^v is not contained in L"));
        }
        let kind = match self.colength(l, &lv) {
            Some(0) => VertexType::One,
            Some(2) => VertexType::ZeroTwo,
            Some(4) => VertexType::Three,
            _ => return Err(Error::NotVertexLattice("L is not contained in L^v with colength 0, 2 or 4")),
        };
        Ok((kind, lv))
    }

    pub fn vertex_hull(&self, d: &WindowLattice) -> Result<VertexHull> {
        let Some((dv, pdv)) = self.rz_duals(d)? else {
            return Err(Error::InvalidArgument("not a point of the Rapoport-Zink space".into()));
        };
        let td = self.tau(d);
        if td == *d {
            return Ok(VertexHull {
                sum: Some(d.clone()),
                intersection: Some(d.clone()),
                stratum: HullStratum::Superspecial,
            });
        }
        let s = self.sum(d, &td);
        let i = self.intersection(d, &td);
        let sum = self.is_tau_stable(&s).then_some(s);
        let intersection = self.is_tau_stable(&i).then_some(i);
        if let Some(l) = &sum {
            self.check_sum_chain(d, &dv, &pdv, l)?;
        }
        if let Some(l) = &intersection {
            self.check_intersection_chain(d, &dv, &pdv, l)?;
        }
        let stratum = match (&sum, &intersection) {
            (Some(_), Some(_)) => HullStratum::Edge13,
            (Some(_), None) => HullStratum::Open1,
            (None, Some(_)) => HullStratum::Open3,
            (None, None) => return Err(Error::NotVertexLattice("neither D + tau D nor D ∩ tau D is tau-stable")),
        };
        Ok(VertexHull { sum, intersection, stratum })
    }

    /// `pL^v ⊂¹ pD^v ⊂² D ⊂¹ L = L^v ⊂¹ D^v`.
    fn check_sum_chain(&self, d: &WindowLattice, dv: &WindowLattice, pdv: &WindowLattice, l: &WindowLattice) -> Result<()> {
        let (kind, lv) = self.typed_dual(l)?;
        if kind != VertexType::One {
            return Err(Error::NotVertexLattice("sum hull is not of type 1"));
        }
        let chain = [
            self.colength(&self.scale(&lv, 1)?, pdv),
            self.colength(pdv, d),
            self.colength(d, l),
            self.colength(l, &lv),
            self.colength(&lv, dv),
        ];
        if chain != [Some(1), Some(2), Some(1), Some(0), Some(1)] {
            return Err(Error::NotVertexLattice("sum chain colengths"));
        }
        Ok(())
    }

    /// `pD^v ⊂¹ pL^v = L ⊂¹ D ⊂² D^v ⊂¹ L^v`.
    fn check_intersection_chain(
        &self,
        d: &WindowLattice,
        dv: &WindowLattice,
        pdv: &WindowLattice,
        l: &WindowLattice,
    ) -> Result<()> {
        let (kind, lv) = self.typed_dual(l)?;
        if kind != VertexType::Three {
            return Err(Error::NotVertexLattice("intersection hull is not of type 3"));
        }
        let plv = self.scale(&lv, 1)?;
        let chain = [
            self.colength(pdv, &plv),
            self.colength(&plv, l),
            self.colength(l, d),
            self.colength(d, dv),
            self.colength(dv, &lv),
        ];
        if chain != [Some(1), Some(0), Some(1), Some(2), Some(1)] {
            return Err(Error::NotVertexLattice("intersection chain colengths"));
        }
        Ok(())
    }

    /// Vertex lattices inside the window adjacent to `l` in the incidence graph
    /// (types 1 and 3 meet type 02). The window bounds are imposed on the quotient
    /// before lifting, which keeps boundary lattices cheap.
    pub fn vertex_neighbors(&self, l: &WindowLattice, kind: VertexType) -> Result<Vec<(WindowLattice, VertexType)>> {
        let f = self.field().clone();
        let top = self.scale(&self.standard(), -1)?;
        let bottom = self.scale(&self.standard(), 1)?;
        let mut out = Vec::new();
        let mut lift = |q: &Quotient, subs: Vec<Subspace>, want: VertexType| {
            for u in subs {
                let x = q.preimage(self, &u);
                if self.vertex_type(&x).ok() == Some(want) {
                    out.push((x, want));
                }
            }
        };
        // lines of the quotient inside the image of `cap`
        let lines_below = |q: &Quotient, cap: &WindowLattice| -> Result<Vec<Subspace>> {
            let z = q.image(self, &self.intersection(q.top(), cap))?;
            Ok(rational_lines_in(&f, &z))
        };
        // lines of the quotient containing the image of `floor`
        let lines_above = |q: &Quotient, floor: &WindowLattice| -> Result<Vec<Subspace>> {
            let w = q.image(self, &self.sum(q.bottom(), floor))?;
            Ok(match w.dim() {
                0 => rational_lines_in(&f, &Subspace::span(&f, q.dim(), &identity(q.dim()))),
                1 => vec![w],
                _ => Vec::new(),
            })
        };
        match kind {
            VertexType::One => {
                let q = Quotient::new(self, l, &self.scale(l, 1)?)?;
                let w = q.image(self, &self.sum(q.bottom(), &bottom))?;
                let hyperplanes = rational_lines_in(&f, &w.annihilator(&f)).iter().map(|h| h.annihilator(&f)).collect();
                lift(&q, hyperplanes, VertexType::ZeroTwo);
            }
            VertexType::ZeroTwo => {
                let lv = self.dual(l);
                let up = Quotient::new(self, &lv, l)?;
                lift(&up, lines_below(&up, &top)?, VertexType::One);
                let down = Quotient::new(self, l, &self.scale(&lv, 1)?)?;
                lift(&down, lines_above(&down, &bottom)?, VertexType::Three);
            }
            VertexType::Three => {
                let q = Quotient::new(self, &self.dual(l), l)?;
                lift(&q, lines_below(&q, &top)?, VertexType::ZeroTwo);
            }
        }
        Ok(out)
    }

    /// Vertex lattices inside the window with their incidence edges, found by walking the
    /// incidence graph from `L_std`. Vertex lattices are rational, so for `m > 1` the walk
    /// runs over `F_{p^2}` and the result is transported.
    pub fn enumerate_vertex_lattices(&self) -> Result<VertexComplex> {
        if self.field().m() == 1 {
            return self.walk_vertex_lattices();
        }
        let small = LatticeSpace::new(Arc::new(Field::new(self.field().p(), 1)?), self.window())?;
        let embed = SubfieldEmbedding::new(small.field(), self.field())?;
        let base = small.walk_vertex_lattices()?;
        let nodes = base.nodes.iter().map(|(l, t)| (self.transport(&small, l, &embed), *t)).collect();
        Ok(VertexComplex { nodes, edges: base.edges })
    }

    fn walk_vertex_lattices(&self) -> Result<VertexComplex> {
        let start = (VertexType::One, self.standard());
        let mut index: BTreeMap<(VertexType, WindowLattice), usize> = BTreeMap::new();
        let mut found = vec![start.clone()];
        index.insert(start, 0);
        let mut edges = BTreeSet::new();
        let mut next = 0;
        while next < found.len() {
            let (kind, l) = found[next].clone();
            for (x, t) in self.vertex_neighbors(&l, kind)? {
                if !self.in_window(&x) {
                    continue;
                }
                let j = *index.entry((t, x.clone())).or_insert_with(|| {
                    found.push((t, x));
                    found.len() - 1
                });
                edges.insert((next.min(j), next.max(j)));
            }
            next += 1;
        }
        // renumber in canonical order
        let order: Vec<usize> = index.values().copied().collect();
        let mut rank = vec![0; found.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let mut edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(i, j)| (rank[i].min(rank[j]), rank[i].max(rank[j]))).collect();
        edges.sort_unstable();
        let nodes = index.into_keys().map(|(t, l)| (l, t)).collect();
        Ok(VertexComplex { nodes, edges })
    }

    /// Points of the lattice stratum of `within`: `D ⊆ L` for type 1, `L ⊆ D` for types 3 and 02.
    /// Sorted canonically.
    pub fn enumerate_rz_points(&self, within: &WindowLattice, how: PointSearch, strict_tau: bool) -> Result<Vec<WindowLattice>> {
        let mut out = match (self.vertex_type(within)?, how) {
            (VertexType::ZeroTwo, _) => {
                if self.is_rz_point(within, strict_tau)? { vec![within.clone()] } else { Vec::new() }
            }
            (_, PointSearch::Model) => {
                let model = self.stratum_model(within)?;
                let subs = model.herm.points(model.side);
                let found = crate::par::map(&subs, |u| {
                    let d = model.point(self, u);
                    self.is_rz_point(&d, strict_tau).map(|ok| ok.then_some(d))
                });
                found.into_iter().filter_map(Result::transpose).collect::<Result<Vec<_>>>()?
            }
            (_, PointSearch::Scan) => self
                .scan_stratum(within)?
                .into_iter()
                .filter(|(_, strict)| *strict || !strict_tau)
                .map(|(d, _)| d)
                .collect(),
        };
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Every lattice `D` of colength one in `L/pL` (type 1) or over `L` inside `L^v` (type 3)
    /// that meets the colength conditions, flagged by whether it also meets the `tau` conditions.
    pub fn scan_stratum(&self, l: &WindowLattice) -> Result<Vec<(WindowLattice, bool)>> {
        self.scan_stratum_sampled(l, 1).map(|(found, _)| found)
    }

    /// [`Self::scan_stratum`] over every `stride`-th candidate, with the number visited.
    pub fn scan_stratum_sampled(&self, l: &WindowLattice, stride: usize) -> Result<(Vec<(WindowLattice, bool)>, usize)> {
        let kind = self.vertex_type(l)?;
        let q = match kind {
            VertexType::One => Quotient::new(self, l, &self.scale(l, 1)?)?,
            VertexType::Three => Quotient::new(self, &self.dual(l), l)?,
            VertexType::ZeroTwo => return Err(Error::NotVertexLattice("type-02 strata are points")),
        };
        let f = self.field();
        let order = f.order() as u128;
        let stride = stride.max(1);
        let candidates = (order.pow(q.dim() as u32) - 1) / (order - 1);
        let visited = candidates.div_ceil(stride as u128);
        if visited > SCAN_BOUND as u128 {
            return Err(Error::InvalidArgument(format!(
                "scanning {visited} candidates exceeds the bound of {SCAN_BOUND}"
            )));
        }
        let lines: Vec<Vec<FieldElem>> = (0..candidates)
            .step_by(stride)
            .filter_map(|i| projective_point(f, q.dim(), i))
            .collect();
        let found = crate::par::map(&lines, |v| -> Result<Option<(WindowLattice, bool)>> {
            let line = Subspace::span(f, q.dim(), std::slice::from_ref(v));
            let u = if kind == VertexType::One { line.annihilator(f) } else { line };
            let d = q.preimage(self, &u);
            let Some((dv, pdv)) = self.rz_duals(&d)? else { return Ok(None) };
            let td = self.tau(&d);
            let strict = self.contains(&dv, &td) && self.contains(&td, &pdv);
            Ok(Some((d, strict)))
        });
        let found = found.into_iter().filter_map(Result::transpose).collect::<Result<Vec<_>>>()?;
        Ok((found, lines.len()))
    }

    /// The hermitian model of `M_L` for a type-1 or type-3 lattice.
    pub fn stratum_model(&self, l: &WindowLattice) -> Result<StratumModel> {
        let kind = self.vertex_type(l)?;
        let (quotient, scale, side) = match kind {
            VertexType::One => (Quotient::new(self, l, &self.scale(l, 1)?)?, 0, Side::Minus),
            VertexType::Three => (Quotient::new(self, &self.dual(l), l)?, 1, Side::Plus),
            VertexType::ZeroTwo => return Err(Error::NotVertexLattice("type-02 strata are points")),
        };
        let gram = quotient.gram(self, scale)?;
        let herm = HermSpace::with_gram(self.field().clone(), 4, gram)?;
        Ok(StratumModel { vertex: l.clone(), kind, quotient, herm, side })
    }
}

fn identity(n: usize) -> Vec<Vec<FieldElem>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { FieldElem::ONE } else { FieldElem::ZERO }).collect()).collect()
}

/// The `F_{p^2}`-rational lines inside a subspace with a rational echelon basis.
fn rational_lines_in(f: &Field, z: &Subspace) -> Vec<Subspace> {
    let basis = z.basis_vecs();
    rational_lines(f, basis.len())
        .into_iter()
        .map(|c| {
            let v: Vec<FieldElem> = (0..z.ambient())
                .map(|j| c.iter().zip(&basis).fold(FieldElem::ZERO, |acc, (&ci, b)| f.add(acc, f.mul(ci, b[j]))))
                .collect();
            Subspace::span(f, z.ambient(), &[v])
        })
        .collect()
}
