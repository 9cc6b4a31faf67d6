//! One line per acceptance criterion, then a single assertion over all of them.
//!
//! The heavy inert runs are shared: each field size is swept once and its reports are
//! handed to every criterion that reads them.

use std::io::Write as _;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rz_strata::gf::Field;
use rz_strata::hermitian::{HermSpace, Side};
use rz_strata::padlat::LatticeSpace;
use rz_strata::verify::{self, check_dl_partition, check_split, CheckReport, Status, Suite};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Collects the conditions of one criterion and names the first that fails.
#[derive(Default)]
struct Conditions {
    failed: Vec<String>,
    seen: usize,
}

impl Conditions {
    fn require(&mut self, ok: bool, what: impl Into<String>) {
        self.seen += 1;
        if !ok {
            self.failed.push(what.into());
        }
    }

    fn verdict(self, summary: impl Into<String>) -> Verdict {
        if self.failed.is_empty() {
            Verdict::new(true, format!("{} ({} conditions)", summary.into(), self.seen))
        } else {
            Verdict::new(false, self.failed.join("; "))
        }
    }
}

fn count(r: &CheckReport, key: &str) -> u64 {
    r.counts.get(key).copied().unwrap_or(0)
}

fn find<'a>(reports: &'a [CheckReport], id: &str, case: &str) -> Option<&'a CheckReport> {
    reports.iter().find(|r| r.id == id && r.params.case.name() == case)
}

fn passed(c: &mut Conditions, reports: &[CheckReport], id: &str, case: &str, m: u32) -> Option<CheckReport> {
    let r = find(reports, id, case).cloned();
    match &r {
        Some(r) => c.require(r.status == Status::Pass, format!("{id} at m={m}: {}", r.summary())),
        None => c.require(false, format!("{id} at m={m}: no report")),
    }
    r
}

/// Inert reports at one field size, p = 3, window 1.
struct Sweep {
    m: u32,
    reports: Vec<CheckReport>,
}

fn sweep(m: u32, suites: &[Suite]) -> Sweep {
    let reports = verify::run_suites(suites, 3, m, 1).unwrap_or_else(|e| panic!("suites at m={m}: {e}"));
    Sweep { m, reports }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rz-strata")
}

fn golden(name: &str) -> Vec<u8> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn tables_reproduced() -> Verdict {
    let mut c = Conditions::default();
    let mut slowest = Duration::ZERO;
    for case in ["split", "inert"] {
        for (format, ext) in [("text", "txt"), ("csv", "csv"), ("json", "json")] {
            let start = Instant::now();
            let out = Command::new(bin()).args(["tables", "--case", case, "--format", format]).output().expect("run binary");
            slowest = slowest.max(start.elapsed());
            c.require(out.status.success(), format!("tables --case {case} --format {format} exited {:?}", out.status.code()));
            c.require(out.stdout == golden(&format!("tables_{case}.{ext}")), format!("tables --case {case} --format {format} differs from golden"));
        }
    }
    c.require(slowest < Duration::from_secs(1), format!("slowest tables run took {slowest:?}"));
    let bad = Command::new(bin()).args(["tables", "--case", "ramified"]).output().expect("run binary");
    c.require(bad.status.code() == Some(2), "an unknown case does not exit 2");
    c.verdict(format!("golden files match, slowest run {} ms", slowest.as_millis()))
}

/// Points of `sum x_i^{p+1} = 0` in `P^3(F_{p^2})`, counted with `F_{p^2} = F_p(sqrt n)`.
///
/// The norm of `a + b sqrt n` is `a^2 - n b^2`, which is `x^{p+1}`, so the count runs over
/// vectors of pairs in `F_p` and never touches the field module.
fn fermat_bruteforce(p: u64) -> u64 {
    let nonresidue = (2..p).find(|&n| (1..p).all(|x| x * x % p != n)).expect("p odd");
    let norms: Vec<u64> = (0..p * p).map(|v| (v / p * (v / p) + (p - nonresidue) * (v % p) % p * (v % p)) % p).collect();
    let mut by_norm = vec![0u64; p as usize];
    for &n in &norms {
        by_norm[n as usize] += 1;
    }
    // vectors in F_{p^2}^4 with zero norm sum, by convolution over the four coordinates
    let mut ways = vec![0u64; p as usize];
    ways[0] = 1;
    for _ in 0..4 {
        let mut next = vec![0u64; p as usize];
        for (s, &w) in ways.iter().enumerate() {
            for (n, &k) in by_norm.iter().enumerate() {
                next[(s + n) % p as usize] += w * k;
            }
        }
        ways = next;
    }
    (ways[0] - 1) / (p * p - 1)
}

/// The Hermitian surface of degree `p+1` is maximal over `F_{p^2}`: its middle Betti number
/// is `d^3 - 4d^2 + 6d - 2` for `d = p+1` and every Frobenius eigenvalue there is `-p`.
fn fermat_formula(p: u64, m: u32) -> u64 {
    let d = p + 1;
    let b2 = d.pow(3) - 4 * d.pow(2) + 6 * d - 2;
    let q = p.pow(2 * m);
    1 + b2 * q + q * q
}

fn fermat_counts() -> Verdict {
    let start = Instant::now();
    let mut c = Conditions::default();
    let mut seen = Vec::new();
    for p in [3u64, 5] {
        let brute = fermat_bruteforce(p);
        let closed = (p.pow(3) + 1) * (p.pow(2) + 1);
        c.require(brute == closed, format!("p={p}: brute force {brute}, (p^3+1)(p^2+1) = {closed}"));
        c.require(fermat_formula(p, 1) == brute, format!("p={p}: Betti formula disagrees with brute force"));
        let herm = HermSpace::standard(Arc::new(Field::new(p as u32, 1).unwrap()), 4);
        let y = herm.points(Side::Plus).len() as u64;
        c.require(y == brute, format!("p={p}: |Y+| = {y}, brute force {brute}"));
        seen.push(format!("p={p}: {y}"));
    }
    let herm = HermSpace::standard(Arc::new(Field::new(3, 2).unwrap()), 4);
    let y2 = herm.points(Side::Plus).len() as u64;
    c.require(y2 == fermat_formula(3, 2), format!("p=3 m=2: |Y+| = {y2}, formula {}", fermat_formula(3, 2)));
    let elapsed = start.elapsed();
    c.require(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"));
    c.verdict(format!("{}, p=3 m=2: {y2}", seen.join(", ")))
}

fn dl_partition() -> Verdict {
    let mut c = Conditions::default();
    let mut shown = Vec::new();
    for m in 1..=3 {
        let start = Instant::now();
        let r = check_dl_partition(Arc::new(Field::new(3, m).unwrap()));
        let elapsed = start.elapsed();
        c.require(r.status == Status::Pass, r.summary());
        c.require(elapsed < Duration::from_secs(300), format!("m={m} took {elapsed:?}"));
        for side in ["minus", "plus"] {
            let [unit, w1, w2] = ["unit", "w1", "w2"].map(|l| count(&r, &format!("{side}.{l}")));
            c.require(unit + w1 + w2 == count(&r, &format!("{side}.points")), format!("m={m} {side}: labels do not cover the points"));
            match m {
                1 => c.require(w1 == 0 && w2 == 0, format!("m=1 {side}: not all unit")),
                2 => c.require(w2 == 0 && w1 > 0, format!("m=2 {side}: w1={w1} w2={w2}")),
                _ => c.require(unit > 0 && w1 > 0 && w2 > 0, format!("m={m} {side}: a label is empty")),
            }
        }
        shown.push(format!("m={m}: {}/{}/{}", count(&r, "minus.unit"), count(&r, "minus.w1"), count(&r, "minus.w2")));
    }
    c.verdict(format!("unit/w1/w2 {}", shown.join(", ")))
}

fn bijections(sweeps: &[&Sweep]) -> Verdict {
    let mut c = Conditions::default();
    let mut shown = Vec::new();
    for s in sweeps {
        for (id, open) in [("f1", "bt.open1"), ("f3", "bt.open3")] {
            let Some(r) = passed(&mut c, &s.reports, id, "inert", s.m) else { continue };
            let points = count(&r, "points");
            let [unit, w1, w2] = ["dl.unit", "dl.w1", "dl.w2"].map(|k| count(&r, k));
            c.require(count(&r, "matched") == points && points > 0, format!("{id} m={}: matched differs from points", s.m));
            c.require(count(&r, "bt.superspecial") == unit, format!("{id} m={}: superspecial against unit", s.m));
            c.require(count(&r, "bt.edge13") == w1, format!("{id} m={}: edge13 against w1", s.m));
            c.require(count(&r, open) == w2, format!("{id} m={}: open stratum against w2", s.m));
            c.require(points == fermat_formula(3, s.m), format!("{id} m={}: {points} points", s.m));
            match s.m {
                1 => c.require(unit == points, format!("{id} m=1: not all unit")),
                2 => c.require(w2 == 0, format!("{id} m=2: w2 bucket is not empty")),
                _ => c.require(unit > 0 && w1 > 0 && w2 > 0, format!("{id} m={}: a bucket is empty", s.m)),
            }
            if s.m == 3 {
                shown.push(format!("{id} m=3 {unit}/{w1}/{w2}"));
            }
        }
    }
    c.verdict(format!("m=1,2,3 matched; {}", shown.join(", ")))
}

fn hull_totality(sweeps: &[&Sweep]) -> Verdict {
    let mut c = Conditions::default();
    let mut shown = Vec::new();
    for s in sweeps {
        let Some(r) = passed(&mut c, &s.reports, "vertex_hull", "inert", s.m) else { continue };
        let tagged: u64 = ["superspecial", "edge13", "open1", "open3"].iter().map(|k| count(&r, k)).sum();
        c.require(tagged == count(&r, "points"), format!("m={}: {tagged} tags for {} points", s.m, count(&r, "points")));
        c.require(count(&r, "failures") == 0, format!("m={}: contradictions", s.m));
        shown.push(format!("m={}: {} points", s.m, count(&r, "points")));
    }
    c.verdict(shown.join(", "))
}

fn split_suite() -> Verdict {
    let mut c = Conditions::default();
    let mut shown = Vec::new();
    for (m, a) in [(1, 1), (2, 1), (2, 2)] {
        let space = LatticeSpace::new(Arc::new(Field::new(3, m).unwrap()), a).unwrap();
        let r = match check_split(&space) {
            Ok(r) => r,
            Err(e) => {
                c.require(false, format!("m={m} a={a}: {e}"));
                continue;
            }
        };
        c.require(r.status == Status::Pass, r.summary());
        let q = 3u64.pow(2 * m);
        let strata = count(&r, "strata");
        c.require(strata > 0 && count(&r, &format!("strata_with_points.{}", q + 1)) == strata, format!("m={m} a={a}: strata are not P^1"));
        c.require(count(&r, "strata_with_superspecial.10") == strata, format!("m={m} a={a}: superspecial count per stratum"));
        c.require(count(&r, "pairs.singleton") > 0, format!("m={m} a={a}: no meeting strata"));
        c.require(count(&r, "tree.nodes") == 1 + 10 + 10 * 9 && count(&r, "tree.edges") == 100, format!("m={m} a={a}: ball is not the 10-regular tree"));
        shown.push(format!("m={m} a={a}: {strata} strata of {} points", q + 1));
    }
    c.verdict(shown.join(", "))
}

fn intersections(sweeps: &[&Sweep]) -> Verdict {
    let mut c = Conditions::default();
    let mut shown = Vec::new();
    for s in sweeps {
        let Some(r) = passed(&mut c, &s.reports, "intersections", "inert", s.m) else { continue };
        let q = 3u64.pow(2 * s.m);
        c.require(count(&r, "type1.singleton") > 0, format!("m={}: no meeting type-1 pair", s.m));
        c.require(count(&r, "type3.singleton") > 0, format!("m={}: no meeting type-3 pair", s.m));
        c.require(count(&r, "mixed.contained") > 0, format!("m={}: no contained mixed pair", s.m));
        c.require(count(&r, "mixed.anchor_points") == q + 1, format!("m={}: {} mixed points", s.m, count(&r, "mixed.anchor_points")));
        c.require(count(&r, "mixed.anchor_tau_fixed") == 10, format!("m={}: {} rational mixed points", s.m, count(&r, "mixed.anchor_tau_fixed")));
        shown.push(format!("m={}: mixed pairs meet in {} points, 10 rational", s.m, q + 1));
    }
    c.verdict(shown.join(", "))
}

fn weyl_oracles() -> Verdict {
    let start = Instant::now();
    let reports = verify::run_suites(&[Suite::Weyl], 3, 1, 1).expect("weyl suite");
    let elapsed = start.elapsed();
    let mut c = Conditions::default();
    let r = passed(&mut c, &reports, "weyl", "inert", 0);
    c.require(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"));
    let r = r.map(|r| r.summary()).unwrap_or_default();
    c.verdict(format!("{} in {} ms", r.trim_start_matches("PASS weyl "), elapsed.as_millis()))
}

fn dimensions(sweeps: &[&Sweep]) -> Verdict {
    let mut c = Conditions::default();
    for s in sweeps {
        passed(&mut c, &s.reports, "bt_adlv", "split", s.m);
        let Some(r) = passed(&mut c, &s.reports, "bt_adlv", "inert", s.m) else { continue };
        for (name, dim) in [("superspecial", 0), ("edge13", 1), ("open1", 2), ("open3", 2)] {
            c.require(count(&r, &format!("length.{name}")) == dim, format!("m={}: length for {name}", s.m));
        }
        if s.m == 3 {
            for (name, dim) in [("superspecial", 0), ("edge13", 1), ("open1", 2), ("open3", 2)] {
                let seen = r.counts.get(&format!("observed.{name}")).copied();
                c.require(seen == Some(dim), format!("m=3: {name} observed as {seen:?}"));
            }
        }
    }
    c.verdict("lengths 0,1,2,2 inert and 0,1 split; point counts agree at m=3")
}

fn probes(sweeps: &[&Sweep]) -> Verdict {
    let mut c = Conditions::default();
    let mut shown = Vec::new();
    for s in sweeps {
        // reports, not assertions: a probe is satisfied once it has run and said something
        match find(&s.reports, "strict_tau", "inert") {
            Some(r) => {
                c.require(r.status != Status::Skipped && count(r, "candidates") > 0, format!("m={}: strict-tau probe empty", s.m));
                c.require(!r.notes.is_empty(), format!("m={}: strict-tau probe has no reading", s.m));
                shown.push(format!("m={} strict-tau violations {}", s.m, count(r, "violations")));
            }
            None => c.require(false, format!("m={}: no strict-tau report", s.m)),
        }
        match find(&s.reports, "superspecial", "inert") {
            Some(r) => {
                let over = r.counts.keys().any(|k| k.starts_with("lines_over_type02."));
                c.require(over, format!("m={}: no type-1-over-02 counts", s.m));
                c.require(!r.witnesses.is_empty(), format!("m={}: no witnesses", s.m));
            }
            None => c.require(false, format!("m={}: no superspecial report", s.m)),
        }
    }
    c.verdict(shown.join(", "))
}

#[test]
fn acceptance() {
    let started = Instant::now();
    let m1 = sweep(1, &[Suite::All]);
    let m2 = sweep(2, &[Suite::All]);
    let m3 = sweep(3, &[Suite::F1, Suite::F3, Suite::Hull, Suite::Superspecial, Suite::Adlv, Suite::Probes]);

    let verdicts = [
        ("table reproduction", tables_reproduced()),
        ("Fermat counts", fermat_counts()),
        ("DL partition", dl_partition()),
        ("bijections f1/f3", bijections(&[&m1, &m2, &m3])),
        ("vertex-hull totality", hull_totality(&[&m2, &m3])),
        ("split suite", split_suite()),
        ("intersection patterns", intersections(&[&m1, &m2])),
        ("Weyl oracles", weyl_oracles()),
        ("dimension consistency", dimensions(&[&m2, &m3])),
        ("open-question probes", probes(&[&m2, &m3])),
    ];
    // written past the test harness's capture so the lines show in every run
    let mut lines = String::new();
    for (i, (title, v)) in verdicts.iter().enumerate() {
        lines += &format!("criterion {:>2} {}: {title}: {}\n", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    lines += &format!("acceptance finished in {:.0} s\n", started.elapsed().as_secs_f64());
    std::io::stderr().write_all(lines.as_bytes()).expect("stderr");
    let failed: Vec<usize> = verdicts.iter().enumerate().filter(|(_, (_, v))| !v.pass).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
