//! Point-level checks of the stratification. Every check returns a [`CheckReport`] with
//! counts, notes, and canonical witnesses for anything that went wrong.

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::hermitian::{p1_points, rational_lines, tally, DlLabel, HermSpace, Side, Subspace};
use crate::padlat::{
    HullStratum, LatticeSpace, PointSearch, Quotient, Row, SplitOps, VertexComplex, VertexType, WindowLattice,
    SCAN_BOUND,
};
use crate::weyl::{self, AffineWeylElement, Case};

const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// The lattice window; absent for checks that never build lattices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    pub case: Case,
}

impl Params {
    pub fn of(space: &LatticeSpace, case: Case) -> Self {
        Self { p: Some(space.field().p()), m: Some(space.field().m()), a: Some(space.window()), case }
    }

    fn of_field(field: &Field, case: Case) -> Self {
        Self { p: Some(field.p()), m: Some(field.m()), a: None, case }
    }

    /// For the Coxeter-group checks, which depend on the case alone.
    fn combinatorial(case: Case) -> Self {
        Self { p: None, m: None, a: None, case }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not run for these parameters; the notes say why.
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub reason: String,
    /// Hermite rows of `p^A L`, each entry as its coefficient vector.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<Vec<u64>>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub params: Params,
    pub status: Status,
    pub counts: BTreeMap<String, u64>,
    pub notes: Vec<String>,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    fn skipped(id: &str, params: Params, why: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            params,
            status: Status::Skipped,
            counts: BTreeMap::new(),
            notes: vec![why.into()],
            witnesses: Vec::new(),
        }
    }

    /// One line: status, id, parameters and counts.
    pub fn summary(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let mut words = vec![status.to_string(), self.id.clone()];
        let params = [("p", self.params.p), ("m", self.params.m), ("a", self.params.a)];
        words.extend(params.iter().filter_map(|(k, v)| v.map(|v| format!("{k}={v}"))));
        words.push(format!("case={}", self.params.case.name()));
        words.extend(self.counts.iter().map(|(k, v)| format!("{k}={v}")));
        words.join(" ")
    }
}

/// Builds a report; a failed expectation records a witness.
struct Recorder {
    report: CheckReport,
    failures: u64,
}

impl Recorder {
    fn new(id: &str, params: Params) -> Self {
        Self {
            report: CheckReport {
                id: id.into(),
                params,
                status: Status::Pass,
                counts: BTreeMap::new(),
                notes: Vec::new(),
                witnesses: Vec::new(),
            },
            failures: 0,
        }
    }

    fn set(&mut self, key: &str, n: usize) {
        self.report.counts.insert(key.into(), n as u64);
    }

    fn bump(&mut self, key: &str) {
        *self.report.counts.entry(key.into()).or_default() += 1;
    }

    fn note(&mut self, s: impl Into<String>) {
        self.report.notes.push(s.into());
    }

    fn exhibit(&mut self, reason: String, lattice: Option<Vec<Vec<Vec<u64>>>>) {
        if self.report.witnesses.len() < MAX_WITNESSES {
            self.report.witnesses.push(Witness { reason, lattice });
        }
    }

    fn expect(&mut self, ok: bool, reason: impl FnOnce() -> String) -> bool {
        if !ok {
            self.failures += 1;
            let r = reason();
            self.exhibit(r, None);
        }
        ok
    }

    fn expect_at(&mut self, space: &LatticeSpace, ok: bool, l: &WindowLattice, reason: impl FnOnce() -> String) -> bool {
        if !ok {
            self.failures += 1;
            let r = reason();
            self.exhibit(r, Some(space.matrix(l)));
        }
        ok
    }

    fn finish(mut self) -> CheckReport {
        self.report.counts.insert("failures".into(), self.failures);
        if self.failures > 0 {
            self.report.status = Status::Fail;
            if self.report.witnesses.is_empty() {
                self.report.witnesses.push(Witness { reason: "unrecorded failure".into(), lattice: None });
            }
        }
        self.report
    }
}

fn stratum_name(s: HullStratum) -> &'static str {
    match s {
        HullStratum::Superspecial => "superspecial",
        HullStratum::Edge13 => "edge13",
        HullStratum::Open1 => "open1",
        HullStratum::Open3 => "open3",
    }
}

/// Which Deligne-Lusztig label a hull stratum must carry inside a stratum of the given type.
fn expected_label(kind: VertexType, s: HullStratum) -> Option<DlLabel> {
    match (kind, s) {
        (_, HullStratum::Superspecial) => Some(DlLabel::Unit),
        (_, HullStratum::Edge13) => Some(DlLabel::W1),
        (VertexType::One, HullStratum::Open1) | (VertexType::Three, HullStratum::Open3) => Some(DlLabel::W2),
        _ => None,
    }
}

/// Whether a full scan of a 4-dimensional quotient over the field stays under [`SCAN_BOUND`].
pub fn scan_feasible(field: &Field) -> bool {
    let q = field.order() as u128;
    (q.pow(4) - 1) / (q - 1) <= SCAN_BOUND as u128
}

/// One point of a lattice stratum and what the checks learned about it.
#[derive(Clone, Debug)]
pub struct PointRecord {
    pub label: DlLabel,
    pub stratum: std::result::Result<HullStratum, String>,
    /// Passes the point conditions including the `tau` clauses.
    pub strict: bool,
    /// Reducing the lattice gives back the subspace it came from.
    pub round_trip: bool,
    /// The image of `pD^v` (type 1) or `D^v` (type 3) is the orthogonal of the subspace.
    pub dual_is_perp: bool,
    pub inside: bool,
    /// `D + tau D` has colength at most one over `D`.
    pub pappas: bool,
    pub sum_hull: Option<String>,
    pub intersection_hull: Option<String>,
    /// Kept on request, and always for superspecial or failing points.
    pub lattice: Option<WindowLattice>,
}

impl PointRecord {
    pub fn sound(&self, kind: VertexType) -> bool {
        self.strict
            && self.round_trip
            && self.dual_is_perp
            && self.inside
            && self.pappas
            && self.stratum.as_ref().ok().and_then(|&s| expected_label(kind, s)) == Some(self.label)
    }
}

/// Every point of the stratum of a type-1 or type-3 lattice, built from its Fermat model.
#[derive(Clone, Debug)]
pub struct StratumSweep {
    pub vertex: WindowLattice,
    pub kind: VertexType,
    pub side: Side,
    pub records: Vec<PointRecord>,
    pub kept: bool,
}

impl StratumSweep {
    pub fn run(space: &LatticeSpace, vertex: &WindowLattice, keep: bool) -> Result<Self> {
        let model = space.stratum_model(vertex)?;
        let subs = model.herm.points(model.side);
        let kind = model.kind;
        let records = crate::par::map(&subs, |u| -> Result<PointRecord> {
            let d = model.point(space, u);
            let label = model.herm.classify(model.side, u)?;
            let strict = space.is_rz_point(&d, true)?;
            let round_trip = model.subspace_of(space, &d).ok().as_ref() == Some(u);
            let dual = match kind {
                VertexType::One => space.scale(&space.dual(&d), 1)?,
                _ => space.dual(&d),
            };
            let dual_is_perp = model.quotient.image(space, &dual).ok() == Some(model.herm.perp_first(u));
            let inside = match kind {
                VertexType::One => space.contains(vertex, &d),
                _ => space.contains(&d, vertex),
            };
            let hull = space.vertex_hull(&d);
            let pappas = match &hull {
                Ok(h) if h.stratum != HullStratum::Open3 => true,
                _ => {
                    let s = space.sum(&d, &space.tau(&d));
                    space.colength(&d, &s).is_some_and(|c| c <= 1)
                }
            };
            let (stratum, sum_hull, intersection_hull) = match hull {
                Ok(h) => (
                    Ok(h.stratum),
                    h.sum.map(|l| l.fingerprint()),
                    h.intersection.map(|l| l.fingerprint()),
                ),
                Err(e) => (Err(e.to_string()), None, None),
            };
            let mut rec = PointRecord {
                label,
                stratum,
                strict,
                round_trip,
                dual_is_perp,
                inside,
                pappas,
                sum_hull,
                intersection_hull,
                lattice: None,
            };
            if keep || !rec.sound(kind) || rec.stratum == Ok(HullStratum::Superspecial) {
                rec.lattice = Some(d);
            }
            Ok(rec)
        });
        let records = records.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Self { vertex: vertex.clone(), kind, side: model.side, records, kept: keep })
    }

    /// All points, when the sweep kept them.
    pub fn points(&self) -> Option<Vec<&WindowLattice>> {
        self.kept.then(|| self.records.iter().filter_map(|r| r.lattice.as_ref()).collect())
    }

    pub fn stratum_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            if let Ok(s) = r.stratum {
                *out.entry(stratum_name(s)).or_default() += 1;
            }
        }
        out
    }
}

/// The bijection of a stratum with its Fermat variety and the matching of labels with hull strata.
/// `scan` is the independent enumeration of the stratum, when it was run.
pub fn bijection_report(
    space: &LatticeSpace,
    sweep: &StratumSweep,
    scan: Option<Result<Vec<WindowLattice>>>,
) -> CheckReport {
    let id = if sweep.kind == VertexType::One { "f1" } else { "f3" };
    let mut rec = Recorder::new(id, Params::of(space, Case::Inert));
    rec.note(format!("vertex {} of type {}", sweep.vertex.fingerprint(), sweep.kind));
    rec.set("points", sweep.records.len());
    for (label, n) in tally(sweep.records.iter().map(|r| r.label)) {
        rec.set(&format!("dl.{label}"), n);
    }
    for (name, n) in sweep.stratum_counts() {
        rec.set(&format!("bt.{name}"), n);
    }
    let mut matched = 0;
    for r in &sweep.records {
        if r.sound(sweep.kind) {
            matched += 1;
            continue;
        }
        let why = format!(
            "label {} stratum {:?} strict {} round trip {} dual/perp {} inside {} pappas {}",
            r.label, r.stratum, r.strict, r.round_trip, r.dual_is_perp, r.inside, r.pappas
        );
        match &r.lattice {
            Some(l) => rec.expect_at(space, false, l, || why),
            None => rec.expect(false, || why),
        };
    }
    rec.set("matched", matched);
    match scan {
        Some(Ok(found)) => {
            rec.set("scan.points", found.len());
            let mut model: Vec<&WindowLattice> = sweep.points().unwrap_or_default();
            model.sort_unstable();
            let agree = model.len() == found.len() && model.iter().zip(&found).all(|(a, b)| *a == b);
            rec.expect(agree, || format!("model gives {} points, scan gives {}", model.len(), found.len()));
        }
        Some(Err(e)) => {
            rec.expect(false, || format!("scan failed: {e}"));
        }
        None => rec.note("submodule scan not run at this field size; injectivity rests on the round trip"),
    }
    rec.finish()
}

fn check_stratum_map(space: &LatticeSpace, l: &WindowLattice) -> Result<CheckReport> {
    let full = scan_feasible(space.field());
    let sweep = StratumSweep::run(space, l, full)?;
    let scan = full.then(|| space.enumerate_rz_points(l, PointSearch::Scan, true));
    Ok(bijection_report(space, &sweep, scan))
}

/// `D -> D/pL` from the stratum of a type-1 lattice onto `Y^(-)` of `L/pL`.
pub fn check_f1(space: &LatticeSpace, l1: &WindowLattice) -> Result<CheckReport> {
    if space.vertex_type(l1)? != VertexType::One {
        return Err(Error::InvalidArgument("check_f1 needs a type-1 lattice".into()));
    }
    check_stratum_map(space, l1)
}

/// `D -> D/L` from the stratum of a type-3 lattice onto `Y^(+)` of `L^v/L`.
pub fn check_f3(space: &LatticeSpace, l3: &WindowLattice) -> Result<CheckReport> {
    if space.vertex_type(l3)? != VertexType::Three {
        return Err(Error::InvalidArgument("check_f3 needs a type-3 lattice".into()));
    }
    check_stratum_map(space, l3)
}

/// Every point of the sweeps gets exactly one hull stratum through a consistent index chain.
pub fn check_vertex_hull(space: &LatticeSpace, sweeps: &[&StratumSweep]) -> CheckReport {
    let mut rec = Recorder::new("vertex_hull", Params::of(space, Case::Inert));
    rec.set("strata", sweeps.len());
    let mut points = 0;
    let mut by_stratum: BTreeMap<&str, usize> = BTreeMap::new();
    for sweep in sweeps {
        for r in &sweep.records {
            points += 1;
            match &r.stratum {
                Ok(s) => *by_stratum.entry(stratum_name(*s)).or_default() += 1,
                Err(e) => {
                    let why = format!("hull failed: {e}");
                    match &r.lattice {
                        Some(l) => rec.expect_at(space, false, l, || why),
                        None => rec.expect(false, || why),
                    };
                }
            }
            if !r.pappas {
                rec.expect(false, || "D + tau D has colength above one".into());
            }
            if !r.strict {
                rec.expect(false, || "point fails the strict point conditions".into());
            }
        }
    }
    rec.set("points", points);
    for (k, v) in by_stratum {
        rec.set(k, v);
    }
    rec.finish()
}

/// Deligne-Lusztig labels on both Fermat varieties, against an independent reading through
/// iterated intersections (minus side) or iterated sums (plus side).
pub fn check_dl_partition(field: Arc<Field>) -> CheckReport {
    let mut rec = Recorder::new("dl_partition", Params::of_field(&field, Case::Inert));
    let herm = HermSpace::standard(field.clone(), 4);
    let f = &*field;
    let mut tallies = Vec::new();
    for side in [Side::Minus, Side::Plus] {
        let pts = herm.points(side);
        let key = if side == Side::Minus { "minus" } else { "plus" };
        rec.set(&format!("{key}.points"), pts.len());
        let labels = crate::par::map(&pts, |u| {
            let by_position = match side {
                Side::Minus => {
                    let t1 = herm.tau(u);
                    let i1 = u.meet(f, &t1);
                    let i2 = i1.meet(f, &herm.tau(&t1));
                    match (i1.dim(), i2.dim()) {
                        (3, _) => Some(DlLabel::Unit),
                        (2, 2) => Some(DlLabel::W1),
                        (2, 1) => Some(DlLabel::W2),
                        _ => None,
                    }
                }
                Side::Plus => {
                    let t1 = herm.tau(u);
                    let s1 = u.join(f, &t1);
                    let s2 = s1.join(f, &herm.tau(&t1));
                    match (s1.dim(), s2.dim()) {
                        (1, _) => Some(DlLabel::Unit),
                        (2, 2) => Some(DlLabel::W1),
                        (2, 3) => Some(DlLabel::W2),
                        _ => None,
                    }
                }
            };
            (herm.classify(side, u).ok(), by_position)
        });
        let mut agree = 0;
        for (a, b) in &labels {
            if a.is_some() && a == b {
                agree += 1;
            }
        }
        rec.set(&format!("{key}.agree"), agree);
        rec.expect(agree == pts.len(), || format!("{key}: {} of {} labels agree", agree, pts.len()));
        let t = tally(labels.iter().filter_map(|(a, _)| *a));
        for (label, n) in &t {
            rec.set(&format!("{key}.{label}"), *n);
        }
        tallies.push(t);
    }
    rec.expect(tallies[0] == tallies[1], || "the two sides carry different label counts".into());
    rec.finish()
}

/// Superspecial points are exactly the type-02 lattices, each the only point over itself.
pub fn check_superspecial(space: &LatticeSpace, complex: &VertexComplex, std_sweep: &StratumSweep) -> Result<CheckReport> {
    let mut rec = Recorder::new("superspecial", Params::of(space, Case::Inert));
    let l02: BTreeSet<&WindowLattice> = complex.of_type(VertexType::ZeroTwo).map(|(_, l)| l).collect();
    rec.set("type02", l02.len());
    for l in &l02 {
        let ok = space.is_rz_point(l, true)?;
        rec.expect_at(space, ok, l, || "type-02 lattice is not a point".into());
    }

    // tau-stable points of the standard stratum against the type-02 lattices next to it
    let std_index = complex.nodes.iter().position(|(l, _)| *l == std_sweep.vertex);
    let adjacency = complex.adjacency();
    let around: Vec<&WindowLattice> = std_index
        .map(|i| adjacency[i].iter().map(|&j| &complex.nodes[j].0).collect())
        .unwrap_or_default();
    let stable: Vec<&WindowLattice> = std_sweep
        .records
        .iter()
        .filter(|r| r.stratum == Ok(HullStratum::Superspecial))
        .filter_map(|r| r.lattice.as_ref())
        .collect();
    rec.set("stable_points", stable.len());
    for d in &stable {
        rec.expect_at(space, l02.contains(d), d, || "tau-stable point is not a type-02 lattice".into());
    }
    rec.expect(stable.len() == around.len(), || {
        format!("{} tau-stable points against {} type-02 neighbours", stable.len(), around.len())
    });
    match std_sweep.points() {
        Some(points) => {
            let mut unique = 0;
            for l in &around {
                let over: Vec<&&WindowLattice> = points.iter().filter(|d| space.contains(d, l)).collect();
                if rec.expect_at(space, over.len() == 1 && **over[0] == **l, l, || {
                    format!("{} points contain this type-02 lattice", over.len())
                }) {
                    unique += 1;
                }
            }
            rec.set("unique_over_type02", unique);
        }
        None => rec.note("uniqueness scan needs the kept points of the standard stratum"),
    }

    // incidence inside the window
    let mut above_hist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut below_hist: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, _) in complex.of_type(VertexType::ZeroTwo) {
        let kinds: Vec<VertexType> = adjacency[i].iter().map(|&j| complex.nodes[j].1).collect();
        let above = kinds.iter().filter(|&&t| t == VertexType::One).count();
        let below = kinds.iter().filter(|&&t| t == VertexType::Three).count();
        *above_hist.entry(above).or_default() += 1;
        *below_hist.entry(below).or_default() += 1;
        let l = &complex.nodes[i].0;
        rec.expect_at(space, above >= 1 && below >= 1, l, || {
            format!("{above} type-1 and {below} type-3 neighbours in the window")
        });
    }
    for (k, n) in &above_hist {
        rec.set(&format!("window.type1_above.{k}"), *n);
    }
    for (k, n) in &below_hist {
        rec.set(&format!("window.type3_below.{k}"), *n);
    }

    // every rational line of L02^v/L02 and of L02/pL02^v, over the type-02 lattices next to L_std
    let f = space.field();
    let mut up_hist: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut down_hist: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for l in &around {
        let lv = space.dual(l);
        let up = Quotient::new(space, &lv, l)?;
        let down = Quotient::new(space, l, &space.scale(&lv, 1)?)?;
        let mut tally_lines = |q: &Quotient, want: VertexType| -> Result<(usize, usize)> {
            let mut hit = 0;
            let mut total = 0;
            for v in rational_lines(f, q.dim()) {
                let x = q.preimage(space, &Subspace::span(f, q.dim(), &[v]));
                total += 1;
                if space.vertex_type(&x).ok() == Some(want) {
                    hit += 1;
                } else if rec.report.witnesses.len() < 2 {
                    rec.exhibit(format!("rational line whose preimage is not of type {want}"), Some(space.matrix(&x)));
                }
            }
            Ok((hit, total))
        };
        *up_hist.entry(tally_lines(&up, VertexType::One)?).or_default() += 1;
        *down_hist.entry(tally_lines(&down, VertexType::Three)?).or_default() += 1;
    }
    for ((hit, total), n) in &up_hist {
        rec.set(&format!("lines_over_type02.type1_of_{total}.{hit}"), *n);
    }
    for ((hit, total), n) in &down_hist {
        rec.set(&format!("lines_under_type02.type3_of_{total}.{hit}"), *n);
    }
    rec.note("line counts over a type-02 lattice are reported, not asserted");
    Ok(rec.finish())
}

/// Common points of pairs of strata, anchored at `L_std` and at a type-3 lattice inside it.
pub fn check_intersections(
    space: &LatticeSpace,
    complex: &VertexComplex,
    std_sweep: &StratumSweep,
    l3_sweep: &StratumSweep,
) -> Result<CheckReport> {
    let mut rec = Recorder::new("intersections", Params::of(space, Case::Inert));
    let (Some(std_pts), Some(l3_pts)) = (std_sweep.points(), l3_sweep.points()) else {
        return Err(Error::InvalidArgument("intersection check needs sweeps that kept their points".into()));
    };
    let l1 = &std_sweep.vertex;
    let l3 = &l3_sweep.vertex;
    let f = space.field();
    let q = f.order() as usize;
    let p2 = (f.p() * f.p()) as usize;

    // a common point D lies in L ∩ L', so vol(L ∩ L') <= vol(D) = 1
    for (_, other) in complex.of_type(VertexType::One) {
        if other == l1 {
            continue;
        }
        let meet = space.intersection(l1, other);
        if space.vol(&meet) > 1 {
            rec.bump("type1.disjoint_by_volume");
            continue;
        }
        let common: Vec<&&WindowLattice> = std_pts.iter().filter(|d| space.contains(other, d)).collect();
        if common.is_empty() {
            rec.bump("type1.empty");
            continue;
        }
        rec.bump("type1.singleton");
        let ok = common.len() == 1
            && **common[0] == meet
            && space.is_tau_stable(&meet)
            && space.vertex_type(&meet).ok() == Some(VertexType::ZeroTwo);
        rec.expect_at(space, ok, other, || format!("{} common points with L_std", common.len()));
    }

    // a common point D contains L3 + L3', so vol(L3 + L3') >= 1
    for (_, other) in complex.of_type(VertexType::Three) {
        if other == l3 {
            continue;
        }
        let join = space.sum(l3, other);
        if space.vol(&join) < 1 {
            rec.bump("type3.disjoint_by_volume");
            continue;
        }
        let common: Vec<&&WindowLattice> = l3_pts.iter().filter(|d| space.contains(d, other)).collect();
        if common.is_empty() {
            rec.bump("type3.empty");
            continue;
        }
        rec.bump("type3.singleton");
        let ok = common.len() == 1
            && **common[0] == join
            && space.vertex_type(&join).ok() == Some(VertexType::ZeroTwo);
        rec.expect_at(space, ok, other, || format!("{} common points with the anchor", common.len()));
    }

    // mixed pairs: the points between L3 and L_std form a projective line
    for (_, other) in complex.of_type(VertexType::Three) {
        let common: BTreeSet<&WindowLattice> =
            std_pts.iter().copied().filter(|d| space.contains(d, other)).collect();
        if !space.contains(l1, other) {
            rec.bump("mixed.not_contained");
            rec.expect_at(space, common.is_empty(), other, || "points over a type-3 lattice outside L_std".into());
            continue;
        }
        rec.bump("mixed.contained");
        let fixed = common.iter().filter(|d| space.is_tau_stable(d)).count();
        rec.expect_at(space, common.len() == q + 1 && fixed == p2 + 1, other, || {
            format!("{} common points, {} tau-fixed", common.len(), fixed)
        });
        let between = Quotient::new(space, l1, other)?;
        let mut line_points = BTreeSet::new();
        for (v, _) in p1_points(f) {
            let d = between.preimage(space, &Subspace::span(f, 2, &[v.to_vec()]));
            rec.expect_at(space, space.is_rz_point(&d, true)?, &d, || "lattice between L3 and L_std is not a point".into());
            line_points.insert(d);
        }
        let same = line_points.len() == common.len() && line_points.iter().zip(&common).all(|(a, b)| a == *b);
        rec.expect_at(space, same, other, || "points between the pair differ from the stratum points".into());
        if other == l3 {
            let from_l3: BTreeSet<&WindowLattice> =
                l3_pts.iter().copied().filter(|d| space.contains(l1, d)).collect();
            rec.expect(from_l3 == common, || "the two strata disagree on their common points".into());
            rec.set("mixed.anchor_points", common.len());
            rec.set("mixed.anchor_tau_fixed", fixed);
        }
    }
    Ok(rec.finish())
}

/// Points of the strata, counted per stratum and per component, for the dimension comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub q: u64,
    /// `(points, components)` per stratum name.
    pub strata: BTreeMap<String, (u64, u64)>,
}

impl Census {
    /// Reads the inert strata off the sweeps of a type-1 and a type-3 lattice.
    pub fn inert(space: &LatticeSpace, one: &StratumSweep, three: &StratumSweep) -> Self {
        let mut strata: BTreeMap<String, (u64, u64)> =
            ["superspecial", "edge13", "open1", "open3"].iter().map(|s| (s.to_string(), (0, 0))).collect();
        let mut edges = BTreeSet::new();
        for r in &one.records {
            match r.stratum {
                Ok(HullStratum::Superspecial) => {
                    let e = strata.get_mut("superspecial").expect("key");
                    e.0 += 1;
                    e.1 += 1;
                }
                Ok(HullStratum::Edge13) => {
                    strata.get_mut("edge13").expect("key").0 += 1;
                    edges.insert(r.intersection_hull.clone());
                }
                Ok(HullStratum::Open1) => strata.get_mut("open1").expect("key").0 += 1,
                _ => {}
            }
        }
        strata.get_mut("edge13").expect("key").1 = edges.len() as u64;
        let open1 = strata.get_mut("open1").expect("key");
        open1.1 = u64::from(open1.0 > 0);
        let open3 = three.records.iter().filter(|r| r.stratum == Ok(HullStratum::Open3)).count() as u64;
        strata.insert("open3".into(), (open3, u64::from(open3 > 0)));
        Self { q: space.field().order() as u64, strata }
    }

    /// Reads the split strata off the stratum of one vertex lattice.
    pub fn split(space: &LatticeSpace) -> Result<Self> {
        let tree = space.split_tree(1)?;
        let odd = tree.nodes.iter().find(|x| space.vol(x) == 1).ok_or(Error::NotVertexLattice("no odd node"))?;
        let l = space.scale(&space.pi_op(odd)?, -1)?;
        let pts = space.split_stratum(&l)?;
        let mut special = 0;
        for (_, m) in &pts {
            if space.a_number(m)? == 2 {
                special += 1;
            }
        }
        let open = pts.len() as u64 - special;
        let strata = BTreeMap::from([
            ("superspecial".to_string(), (special, special)),
            ("open".to_string(), (open, u64::from(open > 0))),
        ]);
        Ok(Self { q: space.field().order() as u64, strata })
    }

    /// `round(log_q(points per component))`, when the stratum has points.
    pub fn observed_dimension(&self, name: &str) -> Option<u32> {
        let &(points, comps) = self.strata.get(name)?;
        if points == 0 || comps == 0 {
            return None;
        }
        let per = points as f64 / comps as f64;
        Some((per.ln() / (self.q as f64).ln()).round() as u32)
    }
}

/// The stratum matched with each row of the Coxeter table, and its dimension.
fn row_stratum(case: Case, sigma: &[usize]) -> Option<(&'static str, u32)> {
    match (case, sigma) {
        (_, [0, 2]) => Some(("superspecial", 0)),
        (Case::Split, [1, 3]) => Some(("open", 1)),
        (Case::Inert, [1, 3]) => Some(("edge13", 1)),
        (Case::Inert, [1]) => Some(("open1", 2)),
        (Case::Inert, [3]) => Some(("open3", 2)),
        _ => None,
    }
}

/// Lengths of the table elements against the dimensions of the matching Bruhat-Tits strata.
pub fn compare_bt_adlv(case: Case, census: &Census, params: Params) -> CheckReport {
    let mut rec = Recorder::new("bt_adlv", params);
    let rows = weyl::coxeter_table(case);
    rec.set("rows", rows.len());
    rec.set("strata", census.strata.len());
    let mut matched = BTreeSet::new();
    let mut top = 0;
    for row in &rows {
        let Some((name, claimed)) = row_stratum(case, &row.sigma_set) else {
            rec.expect(false, || format!("row {:?} matches no stratum", row.sigma_set));
            continue;
        };
        matched.insert(name);
        top = top.max(claimed);
        let len = row.element.length();
        rec.set(&format!("length.{name}"), len as usize);
        rec.expect(len == claimed, || format!("{} has length {len}, stratum {name} has dimension {claimed}", row.w));
        match census.observed_dimension(name) {
            Some(d) => {
                rec.set(&format!("observed.{name}"), d as usize);
                rec.expect(d == claimed, || format!("{name} looks {d}-dimensional by point count"));
            }
            None => rec.note(format!("{name} has no points over F_{}", census.q)),
        }
    }
    let inventory: BTreeSet<&str> = census.strata.keys().map(String::as_str).collect();
    rec.expect(matched == inventory && matched.len() == rows.len(), || {
        format!("rows cover {matched:?}, geometry has {inventory:?}")
    });
    let pure = if case == Case::Split { 1 } else { 2 };
    rec.expect(top == pure, || format!("top dimension {top}, expected {pure}"));
    rec.finish()
}

/// Lattices meeting only the colength conditions, against the full point conditions.
pub fn check_strict_tau(space: &LatticeSpace, strata: &[&WindowLattice], stride: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new("strict_tau", Params::of(space, Case::Inert));
    if stride > 1 {
        rec.note(format!("every {stride}-th candidate of each quotient"));
    }
    let mut candidates = 0;
    let mut loose = 0;
    let mut strict = 0;
    for l in strata {
        let (found, visited) = space.scan_stratum_sampled(l, stride)?;
        candidates += visited;
        for (d, ok) in found {
            loose += 1;
            if ok {
                strict += 1;
            } else {
                rec.exhibit("colength conditions hold but tau D is not inside D^v".into(), Some(space.matrix(&d)));
            }
        }
    }
    rec.set("candidates", candidates);
    rec.set("colength_only", loose);
    rec.set("strict", strict);
    rec.set("violations", loose - strict);
    rec.note(if loose == strict {
        "no lattice in the scanned strata satisfies the colength conditions without the tau clauses"
    } else {
        "the colength conditions alone admit lattices that fail the tau clauses"
    });
    Ok(rec.finish())
}

/// The split case: operators, the tree of vertex lattices, strata as projective lines.
pub fn check_split(space: &LatticeSpace) -> Result<CheckReport> {
    let mut rec = Recorder::new("split", Params::of(space, Case::Split));
    let f = space.field();
    let r = space.ring();
    let p2 = (f.p() * f.p()) as usize;
    let q = f.order() as usize;

    // operator identities on basis vectors and on multiples of them; Pi is defined on the
    // rational vectors, where Pi^2 = p, while Pi^2 = p tau in general
    let g = f.generator();
    let zeta = f.pow(g, (f.order() as u64 - 1) / (f.p() as u64 * f.p() as u64 - 1));
    let mut vectors: Vec<(Row, bool)> = Vec::new();
    for i in 0..4 {
        for (c, rational) in [(f.one(), true), (zeta, true), (g, f.in_subfield(g, 2))] {
            let mut e: Row = [r.zero(); 4];
            e[i] = r.teichmuller(c);
            vectors.push((e, rational));
        }
    }
    let times_p = |x: &Row| x.map(|v| r.mul_p_pow(v, 1));
    for (x, rational) in &vectors {
        let tau_x = x.map(|v| r.frobenius(v, 2));
        rec.expect(space.apply_f(&space.apply_v(x)) == times_p(x), || "F V differs from p".into());
        rec.expect(space.apply_v(&space.apply_f(x)) == times_p(x), || "V F differs from p".into());
        rec.expect(space.apply_v(&tau_x) == space.apply_f(x), || "V tau differs from F".into());
        let pi2 = space.apply_pi(&space.apply_pi(x));
        let want = if *rational { times_p(x) } else { times_p(&tau_x) };
        rec.expect(pi2 == want, || "Pi^2 differs from p tau".into());
    }
    rec.set("operator_vectors", vectors.len());

    // the ball of radius 2
    let tree = space.split_tree(2)?;
    let n = tree.nodes.len();
    rec.set("tree.nodes", n);
    rec.set("tree.edges", tree.edges.len());
    let expect_nodes = 1 + (p2 + 1) + (p2 + 1) * p2;
    rec.expect(n == expect_nodes, || format!("{n} nodes in the ball, expected {expect_nodes}"));
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in &tree.edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    let connected = seen.iter().all(|&s| s);
    rec.expect(connected && tree.edges.len() + 1 == n, || "the ball is not a tree".into());
    for i in 0..n {
        if tree.depth[i] < 2 {
            rec.expect(adj[i].len() == p2 + 1, || format!("interior node of degree {}", adj[i].len()));
        }
    }
    for x in &tree.nodes {
        let ok = space.is_split_vertex(x)?
            && space.frobenius_op(&space.frobenius_op(x)?)? == space.scale(x, 1)?;
        rec.expect_at(space, ok, x, || "vertex lattice with F^2 L != pL".into());
    }

    // strata: the depth-one odd nodes and the neighbours of the first depth-two node
    let stratum_of = |x: &WindowLattice| -> Result<WindowLattice> { space.scale(&space.pi_op(x)?, -1) };
    let mut odd: Vec<WindowLattice> = tree.nodes.iter().filter(|x| space.vol(x) == 1).cloned().collect();
    if let Some(far) = tree.depth.iter().position(|&d| d == 2) {
        let mut dropped = 0;
        for nb in space.neighbors_split(&tree.nodes[far])? {
            let c = space.normalize_split(&nb)?;
            if odd.contains(&c) {
                continue;
            }
            // the neighbours of its points need one more step of room in the frame
            if space.elementary_divisors(&stratum_of(&c)?)[3] + 1 < space.precision() {
                odd.push(c);
            } else {
                dropped += 1;
            }
        }
        if dropped > 0 {
            rec.note(format!("{dropped} strata at distance three left out: the window is too small for them"));
        }
    }
    rec.set("strata", odd.len());
    let mut point_sets: Vec<BTreeSet<WindowLattice>> = Vec::new();
    let mut evens: Vec<BTreeSet<WindowLattice>> = Vec::new();
    let flags: Vec<bool> = p1_points(f).into_iter().map(|(_, fixed)| fixed).collect();
    for x in &odd {
        let l = stratum_of(x)?;
        let pl = space.pi_op(&l)?;
        let quotient = Quotient::new(space, &l, &pl)?;
        let pts = space.split_stratum(&l)?;
        rec.expect(pts.len() == q + 1, || format!("{} points on a stratum", pts.len()));
        let mut fixed = 0;
        let mut set = BTreeSet::new();
        for ((u, m), &rational) in pts.iter().zip(&flags) {
            let ok = space.is_rz_point_split(m)? && quotient.image(space, m).ok().as_ref() == Some(u);
            rec.expect_at(space, ok, m, || "line does not give a point".into());
            let a = space.a_number(m)?;
            let stable = space.is_tau_stable(m);
            rec.expect_at(space, (a == 2) == rational && stable == rational, m, || {
                format!("a-number {a}, tau-stable {stable}, rational line {rational}")
            });
            if rational {
                fixed += 1;
                // the neighbours of a superspecial point give the other strata through it
                let mut through = 0;
                for nb in space.neighbors_split(m)? {
                    let other = stratum_of(&space.normalize_split(&nb)?)?;
                    let pi_other = space.pi_op(&other)?;
                    if space.colength(&pi_other, m) == Some(1) && space.colength(m, &other) == Some(1) {
                        through += 1;
                    }
                }
                rec.expect_at(space, through == p2 + 1, m, || format!("superspecial point on {through} strata"));
            } else {
                let hull = space.vertex_hull_split(m)?;
                let chain = space.colength(&pl, m) == Some(1) && space.colength(m, &l) == Some(1);
                rec.expect_at(space, hull == l && chain, m, || "hull of a point is not its stratum lattice".into());
                no_lemma(space, m, &mut rec)?;
            }
            set.insert(m.clone());
        }
        rec.expect_at(space, fixed == p2 + 1, &l, || format!("{fixed} superspecial points on a stratum"));
        rec.bump(&format!("strata_with_points.{}", pts.len()));
        rec.bump(&format!("strata_with_superspecial.{fixed}"));
        point_sets.push(set);
        let mut e = BTreeSet::new();
        for nb in space.neighbors_split(x)? {
            e.insert(space.normalize_split(&nb)?);
        }
        evens.push(e);
    }
    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            let common: BTreeSet<&WindowLattice> = point_sets[i].intersection(&point_sets[j]).collect();
            let shared: BTreeSet<&WindowLattice> = evens[i].intersection(&evens[j]).collect();
            let ok = common == shared
                && common.len() <= 1
                && common.iter().all(|m| space.a_number(m).ok() == Some(2));
            rec.expect(ok, || format!("strata meet in {} points, tree predicts {}", common.len(), shared.len()));
            rec.bump(if common.is_empty() { "pairs.empty" } else { "pairs.singleton" });
        }
    }
    Ok(rec.finish())
}

/// `F^2 M + pM = FM ∩ VM = V^2 M + pM`, and `FM/pM` has one `F,V`-stable line.
fn no_lemma(space: &LatticeSpace, m: &WindowLattice, rec: &mut Recorder) -> Result<()> {
    let fm = space.frobenius_op(m)?;
    let vm = space.verschiebung_op(m)?;
    let pm = space.scale(m, 1)?;
    let f2 = space.sum(&space.frobenius_op(&fm)?, &pm);
    let v2 = space.sum(&space.verschiebung_op(&vm)?, &pm);
    let meet = space.intersection(&fm, &vm);
    rec.expect_at(space, f2 == meet && meet == v2, m, || "F^2 M + pM, FM ∩ VM, V^2 M + pM differ".into());
    let f = space.field();
    let quotient = Quotient::new(space, &fm, &pm)?;
    let mut stable = Vec::new();
    for (v, _) in p1_points(f) {
        let n = quotient.preimage(space, &Subspace::span(f, 2, &[v.to_vec()]));
        if space.is_fv_stable(&n) {
            stable.push(n);
        }
    }
    rec.expect_at(space, stable.len() == 1 && stable[0] == f2, m, || {
        format!("{} F,V-stable lines in FM/pM", stable.len())
    });
    Ok(())
}

/// The published rows: `Σ`, `w_Σ`, `S̃ - Σ`, `supp_σ`.
type PublishedRow = (&'static [usize], &'static str, &'static [usize], &'static [usize]);

const SPLIT_ROWS: [PublishedRow; 2] = [(&[0, 2], "tau", &[1, 3], &[]), (&[1, 3], "s0*tau", &[0, 2], &[0, 2])];

const INERT_ROWS: [PublishedRow; 4] = [
    (&[0, 2], "tau", &[1, 3], &[]),
    (&[1, 3], "s0*tau", &[0, 2], &[0, 2]),
    (&[3], "s0*s1*tau", &[0, 1, 2], &[0, 1, 2]),
    (&[1], "s0*s3*tau", &[0, 2, 3], &[0, 2, 3]),
];

pub fn published_rows(case: Case) -> &'static [PublishedRow] {
    match case {
        Case::Split => &SPLIT_ROWS,
        Case::Inert => &INERT_ROWS,
    }
}

/// The computed Coxeter table against the published one, with the coset readings and the index set.
pub fn check_tables(case: Case) -> CheckReport {
    let mut rec = Recorder::new("tables", Params::combinatorial(case));
    let rows = weyl::coxeter_table(case);
    let published = published_rows(case);
    rec.set("rows", rows.len());
    rec.expect(rows.len() == published.len(), || format!("{} rows, published {}", rows.len(), published.len()));
    for (row, &(sigma, w, comp, supp)) in rows.iter().zip(published) {
        let same = row.sigma_set == sigma && row.w == w && row.complement == comp && row.supp_sigma == supp;
        rec.expect(same, || format!("row {} differs from the published {w}", row.w));
    }
    let (a, b) = (weyl::eo_set(), weyl::eo_set_left());
    rec.set("eo", a.len());
    rec.expect(a == b, || "the two coset readings of the EO set differ".into());
    rec.expect(weyl::tau().diagram_action() == Some([2, 3, 0, 1]), || "tau does not rotate the diagram by two".into());
    let missing = weyl::j_set_discrepancies(case);
    rec.set("j_set_discrepancies", missing.len());
    for s in missing {
        rec.note(format!("row {s:?} has nodes at different distances from node 0"));
    }
    rec.finish()
}

/// Length against word length, the subword order against deletion, and the two admissible sets.
pub fn check_weyl() -> CheckReport {
    let mut rec = Recorder::new("weyl", Params::combinatorial(Case::Inert));
    let words = weyl::bfs_word_lengths(6);
    rec.set("elements_up_to_6", words.len());
    for (x, &d) in &words {
        rec.expect(x.length() == d, || format!("{} has length {} but word length {d}", x.display_word(), x.length()));
    }
    let small: Vec<AffineWeylElement> = words.iter().filter(|(_, &d)| d <= 4).map(|(x, _)| *x).collect();
    let shifted: Vec<AffineWeylElement> = small.iter().map(|x| x.mul(&weyl::tau())).collect();
    let mut pairs = 0;
    for family in [&small, &shifted] {
        for y in family.iter() {
            let below = weyl::deletion_closure(y);
            for x in family.iter() {
                pairs += 1;
                rec.expect(weyl::bruhat_leq(x, y) == below.contains(x), || {
                    format!("order of {} and {}", x.display_word(), y.display_word())
                });
            }
        }
    }
    rec.set("bruhat_pairs", pairs);
    let (adm, alcoves) = (weyl::adm(), weyl::permissible_set());
    rec.set("adm", adm.len());
    rec.set("permissible", alcoves.len());
    rec.expect(adm == alcoves, || "admissible and permissible sets differ".into());
    rec.finish()
}

/// Suites the command line can ask for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    All,
    Tables,
    Weyl,
    Dl,
    F1,
    F3,
    Hull,
    Superspecial,
    Intersections,
    Split,
    Adlv,
    Probes,
}

/// Lazily computed data shared by the inert checks at one set of parameters.
pub struct InertSession {
    pub space: LatticeSpace,
    complex: OnceCell<VertexComplex>,
    std_sweep: OnceCell<StratumSweep>,
    l3_sweep: OnceCell<StratumSweep>,
}

fn cached<T>(cell: &OnceCell<T>, make: impl FnOnce() -> Result<T>) -> Result<&T> {
    if cell.get().is_none() {
        let _ = cell.set(make()?);
    }
    Ok(cell.get().expect("just set"))
}

impl InertSession {
    pub fn new(p: u32, m: u32, a: u32) -> Result<Self> {
        let space = LatticeSpace::new(Arc::new(Field::new(p, m)?), a)?;
        Ok(Self { space, complex: OnceCell::new(), std_sweep: OnceCell::new(), l3_sweep: OnceCell::new() })
    }

    /// Points are kept in memory only while a full scan is affordable.
    pub fn keeps_points(&self) -> bool {
        scan_feasible(self.space.field())
    }

    pub fn complex(&self) -> Result<&VertexComplex> {
        cached(&self.complex, || self.space.enumerate_vertex_lattices())
    }

    pub fn std_sweep(&self) -> Result<&StratumSweep> {
        cached(&self.std_sweep, || StratumSweep::run(&self.space, &self.space.standard(), self.keeps_points()))
    }

    /// The first type-3 lattice of the window inside `L_std`.
    pub fn anchor_three(&self) -> Result<WindowLattice> {
        let std = self.space.standard();
        self.complex()?
            .of_type(VertexType::Three)
            .map(|(_, l)| l)
            .find(|l| self.space.contains(&std, l))
            .cloned()
            .ok_or(Error::NotVertexLattice("no type-3 lattice inside L_std in the window"))
    }

    pub fn l3_sweep(&self) -> Result<&StratumSweep> {
        cached(&self.l3_sweep, || StratumSweep::run(&self.space, &self.anchor_three()?, self.keeps_points()))
    }

    fn scan(&self, l: &WindowLattice) -> Option<Result<Vec<WindowLattice>>> {
        self.keeps_points().then(|| self.space.enumerate_rz_points(l, PointSearch::Scan, true))
    }

    pub fn f1(&self) -> Result<CheckReport> {
        let sweep = self.std_sweep()?;
        Ok(bijection_report(&self.space, sweep, self.scan(&sweep.vertex)))
    }

    pub fn f3(&self) -> Result<CheckReport> {
        let sweep = self.l3_sweep()?;
        Ok(bijection_report(&self.space, sweep, self.scan(&sweep.vertex)))
    }

    pub fn hull(&self) -> Result<CheckReport> {
        Ok(check_vertex_hull(&self.space, &[self.std_sweep()?, self.l3_sweep()?]))
    }

    pub fn superspecial(&self) -> Result<CheckReport> {
        check_superspecial(&self.space, self.complex()?, self.std_sweep()?)
    }

    pub fn intersections(&self) -> Result<CheckReport> {
        if !self.keeps_points() {
            return Ok(CheckReport::skipped(
                "intersections",
                Params::of(&self.space, Case::Inert),
                "pairwise intersections need every point of the anchor strata in memory",
            ));
        }
        check_intersections(&self.space, self.complex()?, self.std_sweep()?, self.l3_sweep()?)
    }

    pub fn census(&self) -> Result<Census> {
        Ok(Census::inert(&self.space, self.std_sweep()?, self.l3_sweep()?))
    }

    pub fn adlv(&self) -> Result<CheckReport> {
        Ok(compare_bt_adlv(Case::Inert, &self.census()?, Params::of(&self.space, Case::Inert)))
    }

    /// Scans `L_std` and the anchor type-3 lattice, sampled beyond the scan bound.
    pub fn strict_tau(&self) -> Result<CheckReport> {
        let std = self.space.standard();
        let l3 = self.anchor_three()?;
        let stride = if self.keeps_points() { 1 } else { strict_tau_stride(self.space.field()) };
        check_strict_tau(&self.space, &[&std, &l3], stride)
    }
}

/// A stride that keeps a scan of a 4-dimensional quotient under the bound.
pub fn strict_tau_stride(field: &Field) -> usize {
    let q = field.order() as u128;
    let total = (q.pow(4) - 1) / (q - 1);
    (total / (SCAN_BOUND as u128 / 4)).max(1) as usize | 1
}

/// Runs the requested suites at one set of parameters, in a fixed order.
pub fn run_suites(suites: &[Suite], p: u32, m: u32, a: u32) -> Result<Vec<CheckReport>> {
    let want = |s: Suite| suites.contains(&Suite::All) || suites.contains(&s);
    let mut out = Vec::new();
    if want(Suite::Tables) {
        out.push(check_tables(Case::Split));
        out.push(check_tables(Case::Inert));
    }
    if want(Suite::Weyl) {
        out.push(check_weyl());
    }
    if want(Suite::Dl) {
        out.push(check_dl_partition(Arc::new(Field::new(p, m)?)));
    }
    let inert = InertSession::new(p, m, a)?;
    if want(Suite::F1) {
        out.push(inert.f1()?);
    }
    if want(Suite::F3) {
        out.push(inert.f3()?);
    }
    if want(Suite::Hull) {
        out.push(inert.hull()?);
    }
    if want(Suite::Superspecial) {
        out.push(inert.superspecial()?);
    }
    if want(Suite::Intersections) {
        out.push(inert.intersections()?);
    }
    if want(Suite::Adlv) {
        out.push(inert.adlv()?);
        let space = &inert.space;
        out.push(compare_bt_adlv(Case::Split, &Census::split(space)?, Params::of(space, Case::Split)));
    }
    if want(Suite::Split) {
        out.push(check_split(&inert.space)?);
    }
    if want(Suite::Probes) {
        out.push(inert.strict_tau()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(m: u32) -> InertSession {
        InertSession::new(3, m, 1).unwrap()
    }

    #[test]
    fn failed_expectation_carries_a_witness() {
        let mut rec = Recorder::new("t", Params { p: Some(3), m: Some(1), a: Some(1), case: Case::Inert });
        rec.expect(false, || "broken".into());
        let r = rec.finish();
        assert_eq!(r.status, Status::Fail);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn f1_over_f9_is_all_unit() {
        let s = session(1);
        let r = s.f1().unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.counts["points"], 280);
        assert_eq!(r.counts["dl.unit"], 280);
        assert_eq!(r.counts["scan.points"], 280);
    }

    #[test]
    fn f3_over_f9_matches_scan() {
        let s = session(1);
        let r = s.f3().unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.counts["scan.points"], r.counts["points"]);
    }

    #[test]
    fn observed_dimension_rounds_per_component() {
        let c = Census {
            q: 729,
            strata: BTreeMap::from([("edge13".to_string(), (80640, 112)), ("superspecial".to_string(), (280, 280))]),
        };
        assert_eq!(c.observed_dimension("edge13"), Some(1));
        assert_eq!(c.observed_dimension("superspecial"), Some(0));
        assert_eq!(c.observed_dimension("open1"), None);
    }

    #[test]
    fn tables_match_published_rows() {
        assert!(check_tables(Case::Split).passed());
        assert!(check_tables(Case::Inert).passed());
    }

    #[test]
    fn split_strata_are_lines_at_m1() {
        let s = LatticeSpace::new(Arc::new(Field::new(3, 1).unwrap()), 1).unwrap();
        let r = check_split(&s).unwrap();
        assert!(r.passed(), "{r:#?}");
    }
}
