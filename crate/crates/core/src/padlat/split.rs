//! The split case: Dieudonne lattices for `F = B sigma`, `V = p F^{-1}` on `K_0^4`,
//! with `B = diag([[0,1],[p,0]], [[0,1],[p,0]])` acting on row vectors, and the
//! uniformizer `Pi = p B^{-1} sigma` of the quaternion order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::gf::RingElem;
use crate::hermitian::{rational_lines, Subspace};

use super::{LatticeSpace, Quotient, Row, WindowLattice};

/// Operators and tests for the split case.
pub trait SplitOps {
    fn frobenius_op(&self, l: &WindowLattice) -> Result<WindowLattice>;
    fn verschiebung_op(&self, l: &WindowLattice) -> Result<WindowLattice>;
    fn pi_op(&self, l: &WindowLattice) -> Result<WindowLattice>;
    fn is_rz_point_split(&self, m: &WindowLattice) -> Result<bool>;
    fn a_number(&self, m: &WindowLattice) -> Result<u32>;
    fn vertex_hull_split(&self, m: &WindowLattice) -> Result<WindowLattice>;
    fn is_split_vertex(&self, l: &WindowLattice) -> Result<bool>;
    fn neighbors_split(&self, l: &WindowLattice) -> Result<Vec<WindowLattice>>;
    fn normalize_split(&self, l: &WindowLattice) -> Result<WindowLattice>;
    fn split_stratum(&self, l: &WindowLattice) -> Result<Vec<(Subspace, WindowLattice)>>;
    fn split_tree(&self, radius: u32) -> Result<SplitTree>;
    /// `F`, `V` and `Pi` on a single vector.
    fn apply_f(&self, x: &Row) -> Row;
    fn apply_v(&self, x: &Row) -> Row;
    fn apply_pi(&self, x: &Row) -> Row;
    /// `F L ⊆ L` and `V L ⊆ L`, tested on the basis so the images never need the frame.
    fn is_fv_stable(&self, l: &WindowLattice) -> bool;
}

/// The ball of the given radius around `L_std` in the tree of split vertex lattices up to `Pi`.
#[derive(Clone, Debug)]
pub struct SplitTree {
    pub nodes: Vec<WindowLattice>,
    pub depth: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

impl LatticeSpace {
    /// Row map `x -> sigma^k(x) C` for an integer matrix `C` given as `C[i][j]` entries of `p`-powers.
    fn semilinear(&self, x: &Row, k: i64, c: &[[Option<u32>; 4]; 4]) -> Row {
        let r = self.ring();
        let sx = x.map(|v| r.frobenius(v, k));
        std::array::from_fn(|j| {
            (0..4).fold(RingElem::ZERO, |acc, i| match c[i][j] {
                Some(e) => r.add(acc, r.mul_p_pow(sx[i], e)),
                None => acc,
            })
        })
    }

    fn guarded(&self, l: &WindowLattice, k: i64, c: &[[Option<u32>; 4]; 4]) -> Result<WindowLattice> {
        // the image contains p^A L_std only when L contains p^{A-1} L_std
        if self.elementary_divisors(l)[3] >= self.precision() {
            return Err(Error::FrameOverflow);
        }
        Ok(self.map_rows(l, |x| self.semilinear(x, k, c)))
    }
}

/// `B`: `e1 -> e2`, `e2 -> p e1` on row vectors, twice.
const B: [[Option<u32>; 4]; 4] = [
    [None, Some(0), None, None],
    [Some(1), None, None, None],
    [None, None, None, Some(0)],
    [None, None, Some(1), None],
];
/// `V = p F^{-1} = p B^{-1} sigma^{-1}`; `p B^{-1}` has the same shape as `B`.
const P_B_INV: [[Option<u32>; 4]; 4] = B;

impl SplitOps for LatticeSpace {
    fn apply_f(&self, x: &Row) -> Row {
        self.semilinear(x, 1, &B)
    }

    fn apply_v(&self, x: &Row) -> Row {
        self.semilinear(x, -1, &P_B_INV)
    }

    fn apply_pi(&self, x: &Row) -> Row {
        self.semilinear(x, 1, &P_B_INV)
    }

    fn is_fv_stable(&self, l: &WindowLattice) -> bool {
        l.rows().iter().all(|x| self.contains_vector(l, &self.apply_f(x)) && self.contains_vector(l, &self.apply_v(x)))
    }

    fn frobenius_op(&self, l: &WindowLattice) -> Result<WindowLattice> {
        self.guarded(l, 1, &B)
    }

    fn verschiebung_op(&self, l: &WindowLattice) -> Result<WindowLattice> {
        self.guarded(l, -1, &P_B_INV)
    }

    fn pi_op(&self, l: &WindowLattice) -> Result<WindowLattice> {
        self.guarded(l, 1, &P_B_INV)
    }

    fn is_rz_point_split(&self, m: &WindowLattice) -> Result<bool> {
        if self.vol(m) != 0 {
            return Ok(false);
        }
        let vm = self.verschiebung_op(m)?;
        let fm = self.frobenius_op(m)?;
        let pm = self.scale(m, 1)?;
        Ok(self.colength(&vm, m) == Some(2) && self.colength(&pm, &vm) == Some(2) && self.contains(m, &fm))
    }

    fn a_number(&self, m: &WindowLattice) -> Result<u32> {
        let s = self.sum(&self.frobenius_op(m)?, &self.verschiebung_op(m)?);
        self.colength(&s, m).ok_or(Error::InvalidArgument("FM + VM is not inside M".into()))
    }

    fn vertex_hull_split(&self, m: &WindowLattice) -> Result<WindowLattice> {
        if self.a_number(m)? == 2 {
            return Ok(m.clone());
        }
        let l = self.sum(m, &self.tau(m));
        if !self.is_tau_stable(&l) || !self.contains(m, &self.pi_op(&l)?) {
            return Err(Error::NotVertexLattice("M + tau M is not a split vertex lattice"));
        }
        Ok(l)
    }

    fn is_split_vertex(&self, l: &WindowLattice) -> Result<bool> {
        Ok(self.is_tau_stable(l) && self.contains(l, &self.pi_op(l)?))
    }

    /// The `p^2 + 1` vertex lattices `L_0` with `Pi L ⊂¹ L_0 ⊂¹ L`.
    fn neighbors_split(&self, l: &WindowLattice) -> Result<Vec<WindowLattice>> {
        let q = Quotient::new(self, l, &self.pi_op(l)?)?;
        let f = self.field();
        Ok(rational_lines(f, q.dim())
            .into_iter()
            .map(|v| q.preimage(self, &Subspace::span(f, q.dim(), &[v])))
            .collect())
    }

    /// Representative of the `Pi`-homothety class with volume 0 or 1.
    fn normalize_split(&self, l: &WindowLattice) -> Result<WindowLattice> {
        let mut x = l.clone();
        while self.vol(&x) < 0 {
            x = self.pi_op(&x)?;
        }
        while self.vol(&x) >= 2 {
            x = self.scale(&self.pi_op(&x)?, -1)?;
        }
        Ok(x)
    }

    /// `M_L` for a split vertex lattice of volume -1, as lines of `L / Pi L`.
    fn split_stratum(&self, l: &WindowLattice) -> Result<Vec<(Subspace, WindowLattice)>> {
        if self.vol(l) != -1 || !self.is_split_vertex(l)? {
            return Err(Error::NotVertexLattice("split strata come from vertex lattices of volume -1"));
        }
        let q = Quotient::new(self, l, &self.pi_op(l)?)?;
        let f = self.field();
        Ok(crate::hermitian::p1_points(f)
            .into_iter()
            .map(|(v, _)| {
                let u = Subspace::span(f, 2, &[v.to_vec()]);
                let m = q.preimage(self, &u);
                (u, m)
            })
            .collect())
    }

    fn split_tree(&self, radius: u32) -> Result<SplitTree> {
        let root = self.standard();
        let mut index: BTreeMap<WindowLattice, usize> = BTreeMap::new();
        let mut nodes = vec![root.clone()];
        let mut depth = vec![0];
        index.insert(root.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if depth[i] == radius {
                continue;
            }
            for nb in self.neighbors_split(&nodes[i].clone())? {
                let c = self.normalize_split(&nb)?;
                if !index.contains_key(&c) {
                    index.insert(c.clone(), nodes.len());
                    nodes.push(c);
                    depth.push(depth[i] + 1);
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        let mut edges = BTreeSet::new();
        for (i, x) in nodes.iter().enumerate() {
            for nb in self.neighbors_split(x)? {
                if let Some(&j) = index.get(&self.normalize_split(&nb)?) {
                    edges.insert((i.min(j), i.max(j)));
                }
            }
        }
        Ok(SplitTree { nodes, depth, edges: edges.into_iter().collect() })
    }
}
