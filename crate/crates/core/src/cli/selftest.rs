//! Built-in invariant suites and catalog replay.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bkmod::{
    fil_phi_star, hodge_and_classify, make_banal_bk, minuscule_of, to_standard_form, window_of, BkModule, Cocharacter,
    Lattice, Verdict,
};
use crate::cli::{catalog_files, report_emit, run_scenario_file, Format, RunOptions, Status};
use crate::descent::{check_uniqueness, descend};
use crate::displays::{
    decompose, display_iso_from_standard_form, graded_quotients, in_parabolic, in_unipotent, membership_display_group,
    one_bounded, random_gl, random_member, stabilizes_filtration, verify_iso, BanalDisplay, GroupDescriptor,
};
use crate::error::Result;
use crate::prisms::{build_coproduct, is_distinguished, make_bk_prism, verify_kernel_lemmas, CheckStatus, PrismCtx};
use crate::rings::delta::random_elt;
use crate::rings::{axiom_suite, parse_elt, witt2_section, CoeffRing, DeltaCtx, Elt, Mat, Witt2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Reduced sample counts; skips the brute-force enumeration suites.
    Quick,
    /// Sample counts and parameters of the acceptance criteria.
    Full,
}

impl Level {
    fn pick(self, full: usize, quick: usize) -> usize {
        match self {
            Level::Full => full,
            Level::Quick => quick,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub level: Level,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub status: Status,
}

impl Summary {
    /// An empty summary is a failure: it means nothing was run.
    pub fn new(level: Level, seed: u64, suites: Vec<SuiteResult>) -> Summary {
        let status = if suites.is_empty() {
            Status::Failed
        } else {
            suites.iter().fold(Status::Verified, |s, r| s.and(r.status))
        };
        Summary { level, seed, suites, status }
    }
}

/// Pass/fail counter with a few recorded failures.
struct Tally {
    name: &'static str,
    passed: usize,
    total: usize,
    inconclusive: bool,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally { name, passed: 0, total: 0, inconclusive: false, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.notes.len() < 5 {
            self.notes.push(what());
        }
    }

    fn finish(self) -> SuiteResult {
        let status = if self.passed == self.total && self.total > 0 {
            Status::Verified
        } else if self.inconclusive && self.notes.is_empty() {
            Status::Inconclusive
        } else {
            Status::Failed
        };
        SuiteResult { name: self.name.into(), passed: self.passed, total: self.total, status, notes: self.notes }
    }
}

type SuiteFn = fn(Level, &mut ChaCha8Rng) -> Result<SuiteResult>;

/// A named invariant suite.
#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    /// Only run at [`Level::Full`].
    pub full_only: bool,
    run: SuiteFn,
}

impl Suite {
    /// Runs the suite with a random stream derived from `seed` and the
    /// suite's position, so suites are independent of each other's draws.
    pub fn run(&self, level: Level, seed: u64) -> SuiteResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let stream = SUITES.iter().position(|s| s.name == self.name).unwrap_or(0) as u64;
        rng.set_stream(stream);
        (self.run)(level, &mut rng).unwrap_or_else(|e| SuiteResult {
            name: self.name.into(),
            passed: 0,
            total: 1,
            status: Status::of_error(&e),
            notes: vec![e.to_string()],
        })
    }
}

const SUITES: &[Suite] = &[
    Suite { name: "delta-axioms", full_only: false, run: delta_axioms },
    Suite { name: "witt2", full_only: false, run: witt2 },
    Suite { name: "distinguished", full_only: false, run: distinguished },
    Suite { name: "non-displayed", full_only: false, run: non_displayed },
    Suite { name: "minuscule", full_only: false, run: minuscule },
    Suite { name: "standard-form", full_only: false, run: standard_form },
    Suite { name: "window", full_only: false, run: window },
    Suite { name: "display-group", full_only: false, run: display_group },
    Suite { name: "graded-quotients", full_only: true, run: graded },
    Suite { name: "kernel-lemmas", full_only: true, run: kernel_lemmas },
    Suite { name: "descent", full_only: false, run: descent },
    Suite { name: "one-bounded", full_only: false, run: one_bounded_suite },
];

/// The built-in suites that run at `level`.
pub fn suites(level: Level) -> Vec<Suite> {
    SUITES.iter().filter(|s| level == Level::Full || !s.full_only).copied().collect()
}

/// Runs one built-in suite by name.
pub fn run_suite(name: &str, level: Level, seed: u64) -> Option<SuiteResult> {
    SUITES.iter().find(|s| s.name == name).map(|s| s.run(level, seed))
}

/// Runs the built-in suites, then replays every scenario of `catalog` twice,
/// checking its expected status and that both reports are byte-identical.
pub fn selftest(level: Level, seed: u64, catalog: Option<&Path>) -> Summary {
    let mut out: Vec<SuiteResult> = suites(level).iter().map(|s| s.run(level, seed)).collect();
    if let Some(dir) = catalog {
        out.extend(catalog_suites(dir, seed));
    }
    Summary::new(level, seed, out)
}

fn catalog_suites(dir: &Path, seed: u64) -> Vec<SuiteResult> {
    let mut expect = Tally::new("catalog");
    let mut det = Tally::new("determinism");
    let files = match catalog_files(dir) {
        Ok(f) => f,
        Err(e) => {
            expect.check(false, || e.to_string());
            return vec![expect.finish()];
        }
    };
    if files.is_empty() {
        expect.check(false, || format!("no scenarios in {}", dir.display()));
        return vec![expect.finish()];
    }
    let opts = RunOptions { seed, ..RunOptions::default() };
    for f in &files {
        let name = f.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        match (run_scenario_file(f, &opts), run_scenario_file(f, &opts)) {
            (Ok(a), Ok(b)) => {
                expect.check(a.as_expected(), || format!("{name}: status {:?}, expected {:?}", a.status, a.expected));
                let same = report_emit(&a, Format::Json) == report_emit(&b, Format::Json);
                det.check(same, || format!("{name}: reports differ between runs"));
            }
            (Err(e), _) | (_, Err(e)) => expect.check(false, || format!("{name}: {e}")),
        }
    }
    vec![expect.finish(), det.finish()]
}

pub(crate) fn series_prism(p: u64, n: u32, m: u32, e: &str) -> Result<PrismCtx> {
    let a = DeltaCtx::series(CoeffRing::zp(p, n)?, 1, m)?;
    let e = parse_elt(&a, e)?;
    make_bk_prism(&a, e)
}

fn delta_axioms(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("delta-axioms");
    let trials = level.pick(200, 40);
    for (p, n, r, m) in [(2, 4, 1, 8), (3, 3, 2, 5)] {
        let ctx = DeltaCtx::series(CoeffRing::zp(p, n)?, r, m)?;
        let rep = axiom_suite(&ctx, trials, rng.gen());
        for law in rep.laws {
            t.passed += law.passed;
            t.total += law.trials;
            if let Some((x, y)) = &law.counterexample {
                t.notes.push(format!("p={p} r={r}: {} fails at ({x}, {y})", law.law));
            }
        }
    }
    Ok(t.finish())
}

fn random_witt(ctx: &Arc<DeltaCtx>, rng: &mut ChaCha8Rng) -> Witt2 {
    Witt2::new(random_elt(ctx, rng), random_elt(ctx, rng))
}

fn witt2(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("witt2");
    let ctx = DeltaCtx::series(CoeffRing::zp(2, 4)?, 1, 6)?;
    for _ in 0..level.pick(100, 25) {
        let (x, y, z) = (random_witt(&ctx, rng), random_witt(&ctx, rng), random_witt(&ctx, rng));
        t.check(x.add(&y).add(&z).eq_cert(&x.add(&y.add(&z))), || "additive associativity".into());
        t.check(x.mul(&y).mul(&z).eq_cert(&x.mul(&y.mul(&z))), || "multiplicative associativity".into());
        t.check(x.mul(&y.add(&z)).eq_cert(&x.mul(&y).add(&x.mul(&z))), || "distributivity".into());
        let (a, b) = (random_elt(&ctx, rng), random_elt(&ctx, rng));
        let (sa, sb) = (witt2_section(&a)?, witt2_section(&b)?);
        t.check(witt2_section(&(&a + &b))?.eq_cert(&sa.add(&sb)), || format!("s({a} + {b})"));
        t.check(witt2_section(&(&a * &b))?.eq_cert(&sa.mul(&sb)), || format!("s({a} * {b})"));
        t.check(sa.epsilon().eq_cert(&a), || format!("epsilon(s({a}))"));
    }
    Ok(t.finish())
}

fn distinguished(_: Level, _: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("distinguished");
    let ctx = DeltaCtx::series(CoeffRing::zp(2, 4)?, 1, 8)?;
    let e = parse_elt(&ctx, "2 + t")?;
    let cases = [(e.clone(), true), (ctx.pi(), true), (ctx.var(0), false), (e.pow(2), false)];
    for (d, want) in cases {
        let r = is_distinguished(&d)?;
        t.check(r.flag == want && r.equiv_check == want, || format!("{d}: {r:?}"));
    }
    Ok(t.finish())
}

/// `Fil^i + E A^n`, the preimage of `P^i` in `phi^* M`.
fn hodge_preimage(m: &BkModule, i: i64) -> Lattice {
    let e = m.prism().e().clone();
    fil_phi_star(m, i).lattice.plus(&Lattice::columns(&Mat::diag(&vec![e; m.rank()])))
}

fn non_displayed(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("non-displayed");
    let pr = series_prism(3, 4, 6, "3 + t")?;
    let ctx = pr.ring().clone();
    let d = pr.e().clone();
    let f = Mat::from_rows(vec![vec![ctx.pi(), d.clone()], vec![d.clone(), d.pow(2)]])?;
    let m = BkModule::new(&pr, f, 0)?;
    let c = hodge_and_classify(&m);
    t.check(c.displayed == Verdict::False, || format!("counterexample classified {:?}", c.displayed));
    match &c.witness {
        Some(w) => {
            let v: Vec<Elt> = w.vector.iter().map(|s| parse_elt(&ctx, s)).collect::<Result<_>>()?;
            let pv: Vec<Elt> = v.iter().map(|a| a * &ctx.pi()).collect();
            let (here, next) = (hodge_preimage(&m, w.level), hodge_preimage(&m, w.level + 1));
            t.check(here.contains(&v), || "witness is not in P^i".into());
            t.check(!next.contains(&v), || "witness is zero in P^i/P^(i+1)".into());
            t.check(next.contains(&pv), || "witness is not killed by pi".into());
        }
        None => t.check(false, || "no witness".into()),
    }
    let mu = Cocharacter::new(vec![1, 0])?;
    for _ in 0..level.pick(50, 10) {
        let x = random_gl(&pr, 2, rng);
        let c = hodge_and_classify(&make_banal_bk(&pr, &mu, &x)?);
        t.check(c.displayed == Verdict::True && c.mu.as_ref() == Some(&mu), || {
            format!("banal X = {:?}", x.to_strings())
        });
    }
    Ok(t.finish())
}

fn random_minuscule(n: usize, rng: &mut ChaCha8Rng) -> Result<Cocharacter> {
    let k = rng.gen_range(0..=n);
    Cocharacter::new((0..n).map(|i| i64::from(i < k)).collect())
}

fn minuscule(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("minuscule");
    // Type (1,1,1) has determinant order 3, so the decision precision needs
    // more digits than the other suites use.
    let pr = series_prism(3, 6, 8, "3 + t")?;
    for _ in 0..level.pick(50, 10) {
        let n = rng.gen_range(2..=3);
        let mu = random_minuscule(n, rng)?;
        let c = hodge_and_classify(&make_banal_bk(&pr, &mu, &random_gl(&pr, n, rng))?);
        t.check(c.minuscule_filtration == Verdict::True && c.minuscule_cokernel, || {
            format!("minuscule banal of type {mu}: {:?} vs {}", c.minuscule_filtration, c.minuscule_cokernel)
        });
    }
    // Non-effective modules: F = X diag(E^a) / E^k with some a_i < k.
    let shapes: [(&[i64], u32); 5] = [(&[1, 0], 1), (&[0, 0], 1), (&[2, 1], 2), (&[1, 1, 0], 1), (&[2, 0], 1)];
    for k in 0..level.pick(10, 5) {
        let (a, denom) = shapes[k % shapes.len()];
        let x = random_gl(&pr, a.len(), rng);
        let f = x.mul(&Mat::diag_pow(pr.e(), a));
        let c = hodge_and_classify(&BkModule::new(&pr, f, denom)?);
        t.check(c.minuscule_filtration == Verdict::False && !c.minuscule_cokernel, || {
            format!("non-effective {a:?}/E^{denom}: {:?} vs {}", c.minuscule_filtration, c.minuscule_cokernel)
        });
    }
    Ok(t.finish())
}

fn standard_form(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("standard-form");
    let pr = series_prism(3, 4, 6, "3 + t")?;
    let types: [&[i64]; 3] = [&[1, 0], &[1, 0, 0], &[1, 1, 0]];
    for k in 0..level.pick(20, 6) {
        let mu = Cocharacter::new(types[k % types.len()].to_vec())?;
        let n = mu.rank();
        let group = GroupDescriptor::Gl(n);
        let x0 = random_gl(&pr, n, rng);
        let sf = to_standard_form(&make_banal_bk(&pr, &mu, &x0)?)?;
        let g = display_iso_from_standard_form(&pr, group, &x0, &sf)?;
        let d0 = BanalDisplay::new(&pr, group, mu.clone(), x0)?;
        let d = BanalDisplay::new(&pr, group, sf.mu.clone(), sf.x.clone())?;
        t.check(sf.mu == mu && verify_iso(&d, &d0, &g)?, || format!("type {mu}: nonzero residual"));
    }
    Ok(t.finish())
}

fn window(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("window");
    let pr = series_prism(3, 6, 8, "3 + t")?;
    for _ in 0..level.pick(10, 4) {
        let n = rng.gen_range(2..=3);
        let mu = random_minuscule(n, rng)?;
        let m = make_banal_bk(&pr, &mu, &random_gl(&pr, n, rng))?;
        let w = window_of(&m)?;
        let ok = w.validate().is_ok() && minuscule_of(&w)?.f_num().eq_cert(m.f_num());
        t.check(ok, || format!("type {mu}: round trip differs"));
    }
    Ok(t.finish())
}

fn display_group(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("display-group");
    let pr = series_prism(2, 3, 4, "2 + t")?;
    let mu = Cocharacter::new(vec![1, 1, 0])?;
    let gl3 = GroupDescriptor::Gl(3);
    for _ in 0..level.pick(100, 20) {
        let g = random_member(&pr, &mu, rng);
        let Some(ge) = membership_display_group(&gl3, &pr, &mu, &g) else {
            t.check(false, || "random member rejected".into());
            continue;
        };
        let (u, p) = decompose(&gl3, &pr, &mu, &ge)?;
        let ok = u.g.mul(&p.g).eq_cert(&g) && in_unipotent(&mu, &u.g) && in_parabolic(&mu, &p.g);
        t.check(ok, || "split does not recompose".into());
    }
    let mut outside = 0;
    for k in 0..level.pick(200, 40) {
        let g = if k % 2 == 0 { random_member(&pr, &mu, rng) } else { random_gl(&pr, 3, rng) };
        let member = membership_display_group(&gl3, &pr, &mu, &g).is_some();
        outside += usize::from(!member);
        t.check(member == stabilizes_filtration(&pr, &mu, &g), || format!("criteria disagree on {:?}", g.to_strings()));
    }
    t.check(outside > 0, || "no non-member was sampled".into());
    Ok(t.finish())
}

fn graded(_: Level, _: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("graded-quotients");
    let pr = series_prism(2, 2, 2, "2 + t")?;
    let r = graded_quotients(&GroupDescriptor::Gl(2), &Cocharacter::new(vec![1, 0])?, &pr, 1, 1 << 24)?;
    for q in &r.pieces {
        t.check(q.matches, || format!("m = {}: observed p^{}, expected p^{}", q.m, q.observed_log, q.expected_log));
    }
    Ok(t.finish())
}

fn kernel_lemmas(_: Level, _: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("kernel-lemmas");
    let env = build_coproduct(&series_prism(2, 3, 4, "2 + t")?, 2, 400_000)?;
    for c in verify_kernel_lemmas(&env)? {
        if c.status == CheckStatus::Inconclusive {
            t.inconclusive = true;
        }
        t.check(c.status == CheckStatus::Verified, || format!("{} on {}: {:?}", c.lemma, c.generator, c.status));
    }
    Ok(t.finish())
}

fn descent(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("descent");
    let pr = series_prism(2, 3, 4, "2 + t")?;
    let mu = Cocharacter::new(vec![1, 0])?;
    for _ in 0..level.pick(10, 3) {
        let x = random_gl(&pr, 2, rng);
        let label = format!("{:?}", x.to_strings());
        let dsp = BanalDisplay::new(&pr, GroupDescriptor::Gl(2), mu.clone(), x)?;
        let (prob, desc) = descend(&dsp, 2, 3, 400_000, 200)?;
        t.check(desc.fold_is_identity && desc.residual_zero, || format!("X = {label}: residual"));
        let uq = check_uniqueness(&prob, &desc)?;
        t.check(uq.status == CheckStatus::Verified, || format!("X = {label}: uniqueness {:?}", uq.status));
    }
    Ok(t.finish())
}

/// Every difference of weights is at most one.
fn weights_one_bounded(w: &[i64]) -> bool {
    w.iter().all(|a| w.iter().all(|b| a - b <= 1))
}

fn one_bounded_suite(level: Level, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut t = Tally::new("one-bounded");
    for _ in 0..level.pick(50, 50) {
        let n = rng.gen_range(1..=5);
        let mut w: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        let mu = Cocharacter::new(w.clone())?;
        t.check(one_bounded(&GroupDescriptor::Gl(n), &mu) == weights_one_bounded(&w), || format!("GL{n} {w:?}"));
    }
    let o4 = GroupDescriptor::Orth(4);
    t.check(one_bounded(&o4, &Cocharacter::new(vec![1, 0, 0, -1])?), || "O4 (1,0,0,-1)".into());
    t.check(!one_bounded(&o4, &Cocharacter::new(vec![1, 1, -1, -1])?), || "O4 (1,1,-1,-1)".into());
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_summary_fails() {
        assert_eq!(Summary::new(Level::Quick, 0, Vec::new()).status, Status::Failed);
    }

    #[test]
    fn empty_catalog_fails() {
        let dir = std::env::temp_dir().join(format!("prismdisp-empty-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let r = catalog_suites(&dir, 1);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].status, Status::Failed);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn cheap_suites_pass() {
        for name in ["distinguished", "one-bounded", "witt2"] {
            let r = run_suite(name, Level::Quick, 7).unwrap();
            assert_eq!(r.status, Status::Verified, "{r:?}");
        }
    }
}
