//! Finite quotients `T / B` with `pT ⊆ B ⊆ T`, as `F_{p^{2m}}`-vector spaces.
//!
//! Coordinates are taken against the Hermite basis of `T`. For a `tau`-stable `T` that basis
//! is rational, so `tau` acts on coordinates entrywise.

use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::hermitian::Subspace;

use super::{LatticeSpace, Row, WindowLattice, ZERO_ROW};

#[derive(Clone, Debug)]
pub struct Quotient {
    top: WindowLattice,
    bottom: WindowLattice,
    pivots: [u32; 4],
    wide_basis: [Row; 4],
    bottom_image: Subspace,
    free: Vec<usize>,
}

impl Quotient {
    pub fn new(space: &LatticeSpace, top: &WindowLattice, bottom: &WindowLattice) -> Result<Self> {
        let n = space.precision();
        let pivots = space.pivots(top);
        if pivots.iter().any(|&e| e >= n) {
            return Err(Error::FrameOverflow);
        }
        let p_top = space.scale(top, 1)?;
        if !space.contains(top, bottom) || !space.contains(bottom, &p_top) {
            return Err(Error::InvalidArgument("quotient needs pT ⊆ B ⊆ T".into()));
        }
        let wide = space.wide();
        let ring = space.ring();
        let mut wide_basis = [ZERO_ROW; 4];
        for i in 0..4 {
            wide_basis[i][i] = wide.p_pow(pivots[i]);
            for k in i + 1..4 {
                wide_basis[i][k] = wide.lift_digits_from(ring, top.rows[i][k]);
            }
        }
        let mut q = Self {
            top: top.clone(),
            bottom: bottom.clone(),
            pivots,
            wide_basis,
            bottom_image: Subspace::zero(4),
            free: Vec::new(),
        };
        let field = space.field();
        let rows: Vec<Vec<FieldElem>> =
            bottom.rows.iter().map(|r| q.coords_full(space, r).to_vec()).collect();
        q.bottom_image = Subspace::span(field, 4, &rows);
        let pivot_cols: Vec<usize> =
            q.bottom_image.basis().map(|r| r.iter().position(|x| !x.is_zero()).unwrap_or(0)).collect();
        q.free = (0..4).filter(|c| !pivot_cols.contains(c)).collect();
        Ok(q)
    }

    pub fn top(&self) -> &WindowLattice {
        &self.top
    }
    pub fn bottom(&self) -> &WindowLattice {
        &self.bottom
    }
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of `x ∈ T` against the Hermite basis of `T`, modulo `p`.
    pub fn coords_full(&self, space: &LatticeSpace, x: &Row) -> [FieldElem; 4] {
        let w = space.wide();
        let mut c = [w.zero(); 4];
        for k in 0..4 {
            let mut num = w.embed(x[k]);
            for i in 0..k {
                num = w.sub(num, w.mul(c[i], self.wide_basis[i][k]));
            }
            c[k] = w.div_p_pow(num, self.pivots[k]).expect("vector lies in the top lattice");
        }
        c.map(|v| w.reduce(v))
    }

    /// Coordinates in `T / B`, one per free column.
    pub fn coords(&self, space: &LatticeSpace, x: &Row) -> Vec<FieldElem> {
        let f = space.field();
        let mut v = self.coords_full(space, x);
        for row in self.bottom_image.basis() {
            let pc = row.iter().position(|x| !x.is_zero()).expect("echelon row");
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for j in 0..4 {
                v[j] = f.sub(v[j], f.mul(c, row[j]));
            }
        }
        self.free.iter().map(|&j| v[j]).collect()
    }

    /// Teichmuller lift of a quotient vector to `T`.
    pub fn lift(&self, space: &LatticeSpace, v: &[FieldElem]) -> Row {
        let r = space.ring();
        let mut out = ZERO_ROW;
        for (&j, &c) in self.free.iter().zip(v) {
            if c.is_zero() {
                continue;
            }
            let t = r.teichmuller(c);
            for k in 0..4 {
                out[k] = r.add(out[k], r.mul(t, self.top.rows[j][k]));
            }
        }
        out
    }

    pub fn preimage(&self, space: &LatticeSpace, sub: &Subspace) -> WindowLattice {
        let mut gens: Vec<Row> = self.bottom.rows.to_vec();
        gens.extend(sub.basis().map(|v| self.lift(space, v)));
        space.span(gens)
    }

    /// `D / B` for `B ⊆ D ⊆ T`.
    pub fn image(&self, space: &LatticeSpace, d: &WindowLattice) -> Result<Subspace> {
        if !space.contains(&self.top, d) || !space.contains(d, &self.bottom) {
            return Err(Error::InvalidArgument("lattice is not between the quotient bounds".into()));
        }
        let vecs: Vec<Vec<FieldElem>> = d.rows.iter().map(|r| self.coords(space, r)).collect();
        Ok(Subspace::span(space.field(), self.dim(), &vecs))
    }

    /// Gram matrix of `p^scale * form` on `T / pT` in the rational Hermite basis.
    pub fn gram(&self, space: &LatticeSpace, scale: u32) -> Result<Vec<FieldElem>> {
        if self.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: self.dim() });
        }
        let w = space.wide();
        let drop = 2 * space.shift() - scale;
        let mut g = Vec::with_capacity(16);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = w.zero();
                for k in 0..4 {
                    acc = w.add(acc, w.mul(self.wide_basis[i][k], w.sigma(self.wide_basis[j][k])));
                }
                let v = w.div_p_pow(acc, drop).ok_or(Error::NotVertexLattice("form is not integral on the quotient"))?;
                g.push(w.reduce(v));
            }
        }
        Ok(g)
    }
}
