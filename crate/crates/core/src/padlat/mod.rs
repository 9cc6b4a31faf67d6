//! Lattices in `W(F_{p^{2m}})[1/p]^4` between `p^A L_std` and `p^{-A} L_std`, `A = a + 1`.
//!
//! A lattice `L` is stored as the Hermite form of `p^A L`, a submodule of `(R/p^N)^4`
//! with `R = GR(p^N, 2m)` and `N = 2A`. Rows are upper triangular with pivots `p^{e_i}`
//! (a zero row stands for `p^N e_i`) and entries above a pivot `p^e` are Teichmuller
//! expansions cut after `e` digits. That reduction commutes with Frobenius, so a
//! `tau`-stable lattice has an `F_{p^2}`-rational Hermite basis.
//!
//! In this frame the bilinear dual is the annihilator of `p^A L` modulo `p^N`, which is
//! computed exactly by a Smith reduction that tracks its column transform.

mod inert;
mod quotient;
mod split;

pub use inert::{HullStratum, PointSearch, StratumModel, VertexComplex, VertexHull, VertexType, SCAN_BOUND};
pub use quotient::Quotient;
pub use split::{SplitOps, SplitTree};

use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem, GaloisRing, RingElem};

pub type Row = [RingElem; 4];

const ZERO_ROW: Row = [RingElem::ZERO; 4];

fn unit_row(r: &GaloisRing, i: usize, e: u32) -> Row {
    let mut row = ZERO_ROW;
    row[i] = r.p_pow(e);
    row
}

fn is_zero_row(r: &Row) -> bool {
    r.iter().all(|x| x.is_zero())
}

/// Canonical Hermite form of `p^A L`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WindowLattice {
    rows: [Row; 4],
}

impl fmt::Debug for WindowLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<Vec<u64>>> =
            self.rows.iter().map(|r| r.iter().map(|x| x.coeffs().to_vec()).collect()).collect();
        f.debug_struct("WindowLattice").field("rows", &rows).finish()
    }
}

impl WindowLattice {
    pub fn rows(&self) -> &[Row; 4] {
        &self.rows
    }

    /// Short stable fingerprint of the canonical form.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for r in &self.rows {
            for x in r {
                for c in x.coeffs() {
                    h.update(c.to_le_bytes());
                }
            }
        }
        h.finalize().iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

/// Working context: the ring `GR(p^N, 2m)`, a wider ring for exact form values, and the window.
pub struct LatticeSpace {
    field: Arc<Field>,
    ring: GaloisRing,
    wide: GaloisRing,
    window: u32,
    shift: u32,
}

impl fmt::Debug for LatticeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeSpace")
            .field("p", &self.field.p())
            .field("m", &self.field.m())
            .field("window", &self.window)
            .finish()
    }
}

impl LatticeSpace {
    pub fn new(field: Arc<Field>, window: u32) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidArgument("window must be at least 1".into()));
        }
        let shift = window + 1;
        let prec = 2 * shift;
        let ring = GaloisRing::new(field.clone(), prec)?;
        // Exact coordinates and form values need a few digits beyond 2N.
        let p = field.p() as u64;
        let mut wide_prec = 3 * prec;
        while p.checked_pow(wide_prec).is_none_or(|v| v >= 1 << 32) {
            wide_prec -= 1;
        }
        if wide_prec < 2 * prec + 2 {
            return Err(Error::PrecisionOverflow { prec: 2 * prec + 2 });
        }
        let wide = GaloisRing::new(field.clone(), wide_prec)?;
        Ok(Self { field, ring, wide, window, shift })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }
    pub fn wide(&self) -> &GaloisRing {
        &self.wide
    }
    pub fn window(&self) -> u32 {
        self.window
    }
    /// `A`: lattices are stored scaled by `p^A`.
    pub fn shift(&self) -> u32 {
        self.shift
    }
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn standard(&self) -> WindowLattice {
        let mut rows = [ZERO_ROW; 4];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = self.ring.p_pow(self.shift);
        }
        WindowLattice { rows }
    }

    /// Lattice spanned by `p^{-denom} v` for the given integral vectors, plus `p^A L_std`.
    pub fn from_basis(&self, vectors: &[Row], denom: u32) -> Result<WindowLattice> {
        if denom > self.shift {
            return Err(Error::FrameOverflow);
        }
        let k = self.shift - denom;
        Ok(self.hnf(vectors.iter().map(|v| v.map(|x| self.ring.mul_p_pow(x, k))).collect()))
    }

    /// Hermite form of the span of rows given in scaled coordinates.
    pub fn span(&self, gens: Vec<Row>) -> WindowLattice {
        self.hnf(gens)
    }

    fn hnf(&self, gens: Vec<Row>) -> WindowLattice {
        let r = &self.ring;
        let n = r.precision();
        let mut gens: Vec<Row> = gens.into_iter().filter(|g| !is_zero_row(g)).collect();
        let mut out = [ZERO_ROW; 4];
        for col in 0..4 {
            let mut best = None;
            let mut bv = n;
            for (i, g) in gens.iter().enumerate() {
                let v = r.valuation(g[col]);
                if v < bv {
                    bv = v;
                    best = Some(i);
                    if v == 0 {
                        break;
                    }
                }
            }
            let Some(bi) = best else { continue };
            let mut piv = gens.swap_remove(bi);
            let unit = r.div_p_pow(piv[col], bv).expect("pivot valuation");
            if unit != r.one() {
                let uinv = r.inv(unit).expect("unit part");
                for x in piv.iter_mut().skip(col) {
                    *x = r.mul(*x, uinv);
                }
            }
            for g in gens.iter_mut() {
                if g[col].is_zero() {
                    continue;
                }
                let c = r.div_p_pow(g[col], bv).expect("minimal valuation");
                for j in col..4 {
                    g[j] = r.sub(g[j], r.mul(c, piv[j]));
                }
            }
            if bv > 0 {
                let extra = piv.map(|x| r.mul_p_pow(x, n - bv));
                gens.push(extra);
            }
            gens.retain(|g| !is_zero_row(g));
            out[col] = piv;
        }
        for j in 0..4 {
            let e = r.valuation(out[j][j]);
            if e >= n {
                continue;
            }
            for i in 0..j {
                let x = out[i][j];
                let t = r.truncate(x, e);
                if t == x {
                    continue;
                }
                let c = r.div_p_pow(r.sub(x, t), e).expect("reduction");
                for k in j..4 {
                    out[i][k] = r.sub(out[i][k], r.mul(c, out[j][k]));
                }
            }
        }
        WindowLattice { rows: out }
    }

    /// Pivot exponents of the stored Hermite form (`N` for a zero row).
    pub fn pivots(&self, l: &WindowLattice) -> [u32; 4] {
        std::array::from_fn(|i| self.ring.valuation(l.rows[i][i]))
    }

    /// The stored Hermite rows as coefficient vectors, for reports.
    pub fn matrix(&self, l: &WindowLattice) -> Vec<Vec<Vec<u64>>> {
        let deg = self.ring.degree();
        l.rows.iter().map(|r| r.iter().map(|x| x.coeffs()[..deg].to_vec()).collect()).collect()
    }

    /// Valuation of the determinant of a basis; `vol(L_std) = 0`.
    pub fn vol(&self, l: &WindowLattice) -> i64 {
        self.pivots(l).iter().map(|&e| e as i64).sum::<i64>() - 4 * self.shift as i64
    }

    /// Smith form of the stored rows, optionally with the accumulated column transform.
    fn smith(&self, l: &WindowLattice, track: bool) -> ([u32; 4], [Row; 4]) {
        let r = &self.ring;
        let n = r.precision();
        let mut m = l.rows;
        let mut q = [ZERO_ROW; 4];
        if track {
            for (i, row) in q.iter_mut().enumerate() {
                row[i] = r.one();
            }
        }
        let mut f = [n; 4];
        for k in 0..4 {
            let (mut bv, mut br, mut bc) = (n, k, k);
            'find: for i in k..4 {
                for j in k..4 {
                    let v = r.valuation(m[i][j]);
                    if v < bv {
                        (bv, br, bc) = (v, i, j);
                        if v == 0 {
                            break 'find;
                        }
                    }
                }
            }
            if bv == n {
                break;
            }
            m.swap(k, br);
            for i in 0..4 {
                m[i].swap(k, bc);
                if track {
                    q[i].swap(k, bc);
                }
            }
            let unit = r.div_p_pow(m[k][k], bv).expect("pivot valuation");
            let uinv = r.inv(unit).expect("unit part");
            for x in m[k].iter_mut() {
                *x = r.mul(*x, uinv);
            }
            for i in k + 1..4 {
                if m[i][k].is_zero() {
                    continue;
                }
                let c = r.div_p_pow(m[i][k], bv).expect("minimal valuation");
                for j in k..4 {
                    m[i][j] = r.sub(m[i][j], r.mul(c, m[k][j]));
                }
            }
            for j in k + 1..4 {
                if m[k][j].is_zero() {
                    continue;
                }
                let c = r.div_p_pow(m[k][j], bv).expect("minimal valuation");
                for i in 0..4 {
                    m[i][j] = r.sub(m[i][j], r.mul(c, m[i][k]));
                    if track {
                        q[i][j] = r.sub(q[i][j], r.mul(c, q[i][k]));
                    }
                }
            }
            f[k] = bv;
        }
        (f, q)
    }

    /// Elementary divisor exponents of `p^A L` inside `R^4`, ascending.
    pub fn elementary_divisors(&self, l: &WindowLattice) -> [u32; 4] {
        let mut f = self.smith(l, false).0;
        f.sort_unstable();
        f
    }

    /// Bilinear dual `{x : x . y in W for y in L}`.
    pub fn bilinear_dual(&self, l: &WindowLattice) -> WindowLattice {
        let r = &self.ring;
        let n = r.precision();
        let (f, q) = self.smith(l, true);
        let gens = (0..4)
            .filter(|&k| f[k] > 0)
            .map(|k| std::array::from_fn(|i| r.mul_p_pow(q[i][k], n - f[k])))
            .collect();
        self.hnf(gens)
    }

    /// `L^v = {x : form(x, L) in W}`, the dual in the first slot. Its square is `tau`.
    pub fn dual(&self, l: &WindowLattice) -> WindowLattice {
        self.frobenius(&self.bilinear_dual(l), 1)
    }

    /// Dual in the second slot, `{y : form(L, y) in W}`; inverse to [`Self::dual`].
    pub fn dual_second(&self, l: &WindowLattice) -> WindowLattice {
        self.frobenius(&self.bilinear_dual(l), -1)
    }

    /// Entrywise `sigma^k`; the canonical form is preserved.
    pub fn frobenius(&self, l: &WindowLattice, k: i64) -> WindowLattice {
        WindowLattice { rows: l.rows.map(|row| row.map(|x| self.ring.frobenius(x, k))) }
    }

    pub fn tau(&self, l: &WindowLattice) -> WindowLattice {
        self.frobenius(l, 2)
    }

    pub fn is_tau_stable(&self, l: &WindowLattice) -> bool {
        self.tau(l) == *l
    }

    pub fn sum(&self, a: &WindowLattice, b: &WindowLattice) -> WindowLattice {
        self.hnf(a.rows.iter().chain(b.rows.iter()).copied().collect())
    }

    pub fn intersection(&self, a: &WindowLattice, b: &WindowLattice) -> WindowLattice {
        let s = self.sum(&self.bilinear_dual(a), &self.bilinear_dual(b));
        self.bilinear_dual(&s)
    }

    pub fn contains(&self, big: &WindowLattice, small: &WindowLattice) -> bool {
        small.rows.iter().all(|x| self.reduces_to_zero(big, *x))
    }

    /// Whether a vector in the stored coordinates of `p^A L` lies in `l`.
    pub fn contains_vector(&self, l: &WindowLattice, x: &Row) -> bool {
        self.reduces_to_zero(l, *x)
    }

    /// Division of `x` by the Hermite rows of `l` leaves no remainder.
    fn reduces_to_zero(&self, l: &WindowLattice, mut x: Row) -> bool {
        let r = &self.ring;
        for col in 0..4 {
            if x[col].is_zero() {
                continue;
            }
            let e = r.valuation(l.rows[col][col]);
            let Some(c) = r.div_p_pow(x[col], e) else { return false };
            for j in col..4 {
                x[j] = r.sub(x[j], r.mul(c, l.rows[col][j]));
            }
        }
        true
    }

    /// Length of `sup / sub` when `sub ⊆ sup`.
    pub fn colength(&self, sub: &WindowLattice, sup: &WindowLattice) -> Option<u32> {
        self.contains(sup, sub).then(|| (self.vol(sub) - self.vol(sup)) as u32)
    }

    /// `p^k L`; fails when the result would leave the frame.
    pub fn scale(&self, l: &WindowLattice, k: i32) -> Result<WindowLattice> {
        let r = &self.ring;
        let n = r.precision();
        if k >= 0 {
            let k = k as u32;
            if k > n || !(0..4).all(|i| self.reduces_to_zero(l, unit_row(r, i, n - k))) {
                return Err(Error::FrameOverflow);
            }
            let rows = l.rows.map(|row| row.map(|x| r.mul_p_pow(x, k)));
            // the shifted Hermite form stays canonical while no pivot leaves the frame
            if self.pivots(l).iter().all(|&e| e + k < n) {
                return Ok(WindowLattice { rows });
            }
            Ok(self.hnf(rows.to_vec()))
        } else {
            let k = (-k) as u32;
            let mut gens = Vec::with_capacity(8);
            for row in &l.rows {
                let mut out = ZERO_ROW;
                for (o, &x) in out.iter_mut().zip(row) {
                    *o = r.div_p_pow(x, k).ok_or(Error::FrameOverflow)?;
                }
                gens.push(out);
            }
            for i in 0..4 {
                let mut e = ZERO_ROW;
                e[i] = r.p_pow(n - k);
                gens.push(e);
            }
            Ok(self.hnf(gens))
        }
    }

    /// `p^a L_std ⊆ L ⊆ p^{-a} L_std`.
    pub fn in_window(&self, l: &WindowLattice) -> bool {
        let n = self.precision();
        self.elementary_divisors(l)[3] < n
            && l.rows.iter().flatten().all(|&x| self.ring.valuation(x) >= 1)
    }

    /// Applies a row map to the generators; the caller guarantees the image contains `p^A L_std`.
    pub fn map_rows(&self, l: &WindowLattice, f: impl Fn(&Row) -> Row) -> WindowLattice {
        self.hnf(l.rows.iter().filter(|r| !is_zero_row(r)).map(f).collect())
    }

    /// Teichmuller lift of a residue.
    pub fn teichmuller(&self, a: FieldElem) -> RingElem {
        self.ring.teichmuller(a)
    }

    /// Carries a lattice from a space over `F_{p^2}` with the same window into this one.
    /// Only meaningful for `tau`-stable lattices, whose entries are rational.
    pub fn transport(&self, from: &LatticeSpace, l: &WindowLattice, embed: &SubfieldEmbedding) -> WindowLattice {
        let rows = l.rows.map(|row| {
            row.map(|x| {
                let d: Vec<FieldElem> = from.ring.digits(x).into_iter().map(|a| embed.apply(a)).collect();
                self.ring.from_digits(&d)
            })
        });
        WindowLattice { rows }
    }
}

/// Embedding `F_{p^2} -> F_{p^{2m}}` sending the generator of the small modulus to its least root.
pub struct SubfieldEmbedding {
    table: Vec<FieldElem>,
}

impl SubfieldEmbedding {
    pub fn new(small: &Field, big: &Field) -> Result<Self> {
        if small.p() != big.p() || small.degree() != 2 {
            return Err(Error::InvalidArgument("embedding needs F_{p^2} into a field of the same characteristic".into()));
        }
        let modulus = small.params().modulus();
        let eval = |x: FieldElem| {
            modulus.iter().rev().fold(FieldElem::ZERO, |acc, &c| big.add(big.mul(acc, x), big.from_int(c as i64)))
        };
        let root = big.elements().find(|&x| eval(x).is_zero()).ok_or(Error::ReducibleModulus(2))?;
        let table = small
            .elements()
            .map(|a| {
                let c = small.coeffs(a);
                big.add(big.from_int(c[0] as i64), big.mul(big.from_int(c[1] as i64), root))
            })
            .collect();
        Ok(Self { table })
    }

    pub fn apply(&self, a: FieldElem) -> FieldElem {
        self.table[a.index() as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(m: u32) -> LatticeSpace {
        LatticeSpace::new(Arc::new(Field::new(3, m).unwrap()), 1).unwrap()
    }

    fn random_lattice(s: &LatticeSpace, seed: &[u64]) -> WindowLattice {
        // window lattice: p L_std plus a few random vectors of L_std, scaled into the frame
        let r = s.ring();
        let mut gens = Vec::new();
        for i in 0..4 {
            let mut e = ZERO_ROW;
            e[i] = r.p_pow(s.shift() + 1);
            gens.push(e);
        }
        for chunk in seed.chunks(4) {
            let row: Row = std::array::from_fn(|j| {
                let v = chunk.get(j).copied().unwrap_or(0);
                r.mul_p_pow(r.from_coeffs(&[v % 9, v / 9 % 9]), s.shift() - 1)
            });
            gens.push(row);
        }
        s.span(gens)
    }

    #[test]
    fn standard_lattice_is_self_dual() {
        let s = space(1);
        let l = s.standard();
        assert_eq!(s.vol(&l), 0);
        assert_eq!(s.dual(&l), l);
        assert!(s.in_window(&l));
        assert_eq!(s.vol(&s.scale(&l, 1).unwrap()), 4);
        assert_eq!(s.scale(&s.scale(&l, 1).unwrap(), -1).unwrap(), l);
    }

    #[test]
    fn hnf_is_canonical_under_generator_changes() {
        let s = space(1);
        let r = s.ring();
        let l = random_lattice(&s, &[5, 17, 3, 40, 2, 9, 77, 1]);
        let mut gens: Vec<Row> = l.rows().to_vec();
        let u = r.from_coeffs(&[2, 1]);
        gens[0] = gens[0].map(|x| r.mul(x, u));
        let extra: Row = std::array::from_fn(|j| r.add(gens[0][j], gens[1][j]));
        gens.push(extra);
        gens.swap(1, 4);
        assert_eq!(s.span(gens), l);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn duality_laws(seed in proptest::collection::vec(0u64..81, 8)) {
            let s = space(1);
            let l = random_lattice(&s, &seed);
            let d = s.dual(&l);
            prop_assert_eq!(s.dual(&d), s.tau(&l));
            prop_assert_eq!(s.dual_second(&d), l.clone());
            prop_assert_eq!(s.bilinear_dual(&s.bilinear_dual(&l)), l.clone());
            prop_assert_eq!(s.vol(&d), -s.vol(&l));
            prop_assert!(s.in_window(&d));
        }

        #[test]
        fn lattice_operations(a in proptest::collection::vec(0u64..81, 8), b in proptest::collection::vec(0u64..81, 4)) {
            let s = space(2);
            let x = random_lattice(&s, &a);
            let y = random_lattice(&s, &b);
            let sum = s.sum(&x, &y);
            let meet = s.intersection(&x, &y);
            prop_assert!(s.contains(&sum, &x) && s.contains(&sum, &y));
            prop_assert!(s.contains(&x, &meet) && s.contains(&y, &meet));
            // modular law for lengths
            prop_assert_eq!(s.vol(&sum) + s.vol(&meet), s.vol(&x) + s.vol(&y));
            prop_assert_eq!(s.dual(&sum), s.intersection(&s.dual(&x), &s.dual(&y)));
            prop_assert_eq!(s.frobenius(&s.frobenius(&x, 1), -1), x.clone());
        }
    }

    #[test]
    fn transport_preserves_rational_lattices() {
        let small = space(1);
        let big = space(2);
        let emb = SubfieldEmbedding::new(small.field(), big.field()).unwrap();
        let l = random_lattice(&small, &[1, 2, 3, 4, 5, 6, 7, 8]);
        let t = small.sum(&l, &small.tau(&l));
        assert!(small.is_tau_stable(&t));
        let moved = big.transport(&small, &t, &emb);
        assert!(big.is_tau_stable(&moved));
        assert_eq!(big.vol(&moved), small.vol(&t));
        assert_eq!(big.dual(&moved), big.transport(&small, &small.dual(&t), &emb));
    }

    #[test]
    fn frame_overflow_is_reported() {
        let s = space(1);
        let mut l = s.standard();
        for _ in 0..2 {
            l = s.scale(&l, 1).unwrap();
        }
        assert_eq!(s.scale(&l, 1).unwrap_err(), Error::FrameOverflow);
        assert!(!s.in_window(&l));
    }
}
