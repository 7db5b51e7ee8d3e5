//! Dispatch of a scenario to the operation it names.

use std::path::Path;

use crate::bkmod::normal::is_standard_iso;
use crate::bkmod::{
    hodge_and_classify, make_banal_bk, minuscule_of, to_standard_form, window_of, BkModule, Cocharacter, Verdict,
};
use crate::cli::scenario::Built;
use crate::cli::{Command, Report, Scenario, Status};
use crate::descent::{check_uniqueness, descend};
use crate::displays::{
    act, decompose, display_to_bk, graded_quotients, in_parabolic, in_unipotent, membership_display_group, one_bounded,
    phi_torsor_consistent, rees_witness, verify_iso, BanalDisplay, GroupDescriptor,
};
use crate::error::{Error, Result};
use crate::prisms::{build_coproduct, is_distinguished, verify_kernel_lemmas, PrismCtx};
use crate::rings::axiom_suite;

/// Knobs shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    /// Basis-size or enumeration budget.
    pub budget: Option<u64>,
    /// Envelope depth, overriding the scenario's.
    pub depth: Option<usize>,
    /// Random pairs for the ring-axiom check of `prism-check`.
    pub trials: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 42, budget: None, depth: None, trials: 50 }
    }
}

const ENVELOPE_BUDGET: u64 = 400_000;
const ENUMERATION_BUDGET: u64 = 1 << 24;
const SOLVER_ITERATIONS: usize = 200;

fn need<'a, T>(v: &'a Option<T>, what: &str, cmd: Command) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Usage(format!("{} needs {what}", cmd.name())))
}

/// Runs a parsed scenario. Parse, shape and usage errors are returned; every other
/// error becomes report content with a failed or inconclusive status.
pub fn run_scenario(sc: &Scenario, opts: &RunOptions) -> Result<Report> {
    let mut rep = Report::new(&sc.id, sc.command.name());
    rep.expected = sc.expect;
    sc.check_shapes()?;
    let built = sc.build()?;
    rep.precision = Some(built.ring.model_prec());
    let outcome = built.prism().and_then(|pr| match sc.command {
        Command::PrismCheck => prism_check(&mut rep, sc, &built, &pr, opts),
        Command::Bk => bk(&mut rep, sc, &built, &pr),
        Command::Display => display(&mut rep, sc, &built, &pr),
        Command::Descend => descent(&mut rep, sc, &built, &pr, opts),
        Command::Congruence => congruence(&mut rep, sc, &built, &pr, opts),
        Command::KernelLemmas => kernel_lemmas(&mut rep, sc, &pr, opts),
    });
    if let Err(e) = outcome {
        if matches!(e, Error::Parse { .. } | Error::Usage(_) | Error::Dimension(_)) {
            return Err(e);
        }
        rep.put("error", e.to_string());
        rep.fold(Status::of_error(&e));
    }
    Ok(rep)
}

pub fn run_scenario_file(path: &Path, opts: &RunOptions) -> Result<Report> {
    run_scenario(&Scenario::load(path)?, opts)
}

fn group_of(sc: &Scenario, n: usize) -> GroupDescriptor {
    sc.group.unwrap_or(GroupDescriptor::Gl(n))
}

fn banal(sc: &Scenario, b: &Built, pr: &PrismCtx) -> Result<BanalDisplay> {
    let mu = need(&b.mu, "mu", sc.command)?.clone();
    let x = need(&b.x, "x", sc.command)?.clone();
    BanalDisplay::new(pr, group_of(sc, mu.rank()), mu, x)
}

fn prism_check(rep: &mut Report, _sc: &Scenario, b: &Built, pr: &PrismCtx, opts: &RunOptions) -> Result<()> {
    rep.put("e", pr.e().to_string());
    rep.put("crystalline", pr.is_crystalline());
    rep.put("e_t", pr.e_t());
    let d = is_distinguished(pr.e())?;
    rep.put("distinguished", d);
    rep.fold(Status::from_bool(d.flag && d.equiv_check));
    let mut elts = Vec::new();
    for a in &b.elements {
        let d = is_distinguished(a)?;
        elts.push(serde_json::json!({
            "element": a.to_string(),
            "flag": d.flag,
            "equiv_check": d.equiv_check,
        }));
        rep.fold(Status::from_bool(d.flag == d.equiv_check));
    }
    rep.put("elements", elts);
    let ax = axiom_suite(pr.ring(), opts.trials, opts.seed);
    rep.fold(Status::from_bool(ax.all_pass()));
    rep.put("axioms", ax);
    Ok(())
}

fn bk(rep: &mut Report, sc: &Scenario, b: &Built, pr: &PrismCtx) -> Result<()> {
    let m = match (&b.f, &b.mu, &b.x) {
        (Some(f), _, _) => BkModule::new(pr, f.clone(), sc.k.unwrap_or(0))?,
        (None, Some(mu), Some(x)) => make_banal_bk(pr, mu, x)?,
        _ => return Err(Error::Usage("bk needs f, or mu and x".into())),
    };
    rep.put("module", m.record());
    let c = hodge_and_classify(&m);
    rep.put("classification", &c);
    rep.fold(c.displayed.into());
    if c.minuscule == Verdict::True {
        let w = window_of(&m)?;
        w.validate()?;
        let ok = minuscule_of(&w)?.f_num().eq_cert(m.f_num());
        rep.put("window_round_trip", ok);
        rep.fold(Status::from_bool(ok));
    }
    if c.displayed == Verdict::True {
        let sf = to_standard_form(&m)?;
        let ok = is_standard_iso(&m, &sf)?;
        rep.put("standard_form", sf.record());
        rep.put("standard_form_iso", ok);
        rep.fold(Status::from_bool(ok));
    }
    Ok(())
}

fn display(rep: &mut Report, sc: &Scenario, b: &Built, pr: &PrismCtx) -> Result<()> {
    let dsp = banal(sc, b, pr)?;
    rep.put("display", dsp.record());
    rep.put("one_bounded", one_bounded(&dsp.group, &dsp.mu));
    let torsor = phi_torsor_consistent(&dsp)?;
    rep.put("phi_torsor_consistent", torsor);
    rep.fold(Status::from_bool(torsor));
    let c = hodge_and_classify(&display_to_bk(&dsp)?);
    let typed = c.displayed == Verdict::True && c.mu.as_ref() == Some(&dsp.mu);
    rep.put("bk_has_type_mu", typed);
    rep.fold(Status::from_bool(typed));
    let Some(g) = &b.g else { return Ok(()) };
    let Some(ge) = membership_display_group(&dsp.group, pr, &dsp.mu, g) else {
        rep.put("g_member", false);
        rep.fold(Status::Failed);
        return Ok(());
    };
    rep.put("g_member", true);
    let acted = act(&dsp, &ge)?;
    rep.put("acted", acted.x.to_strings());
    let iso = verify_iso(&acted, &dsp, &ge)?;
    let bk_iso = display_to_bk(&dsp)?.is_isomorphism_from(&display_to_bk(&acted)?, &ge.conj)?;
    rep.put("iso_residual_zero", iso);
    rep.put("bk_intertwines", bk_iso);
    rep.fold(Status::from_bool(iso && bk_iso));
    let (u, p) = decompose(&dsp.group, pr, &dsp.mu, &ge)?;
    let split = u.g.mul(&p.g).eq_cert(&ge.g) && in_unipotent(&dsp.mu, &u.g) && in_parabolic(&dsp.mu, &p.g);
    rep.put("decomposition", serde_json::json!({"u": u.g.to_strings(), "p": p.g.to_strings(), "ok": split}));
    rep.fold(Status::from_bool(split));
    let rw = rees_witness(pr, &dsp.mu, &ge)?;
    let rees_ok = rw.evaluate(pr).eq_cert(&ge.g);
    rep.put("rees", rw.records());
    rep.put("rees_evaluates_to_g", rees_ok);
    rep.fold(Status::from_bool(rees_ok));
    Ok(())
}

fn descent(rep: &mut Report, sc: &Scenario, b: &Built, pr: &PrismCtx, opts: &RunOptions) -> Result<()> {
    let dsp = banal(sc, b, pr)?;
    let depth = opts.depth.or(sc.depth).unwrap_or(2);
    let budget = opts.budget.unwrap_or(ENVELOPE_BUDGET) as usize;
    rep.put("display", dsp.record());
    let (prob, desc) = descend(&dsp, depth, depth + 1, budget, SOLVER_ITERATIONS)?;
    rep.put("u", prob.u.to_string());
    rep.put("descent", desc.record(prob.env.depth()));
    rep.fold(Status::from_bool(desc.fold_is_identity && desc.residual_zero));
    let uq = check_uniqueness(&prob, &desc)?;
    rep.fold(uq.status.into());
    rep.put("uniqueness", uq);
    Ok(())
}

fn congruence(rep: &mut Report, sc: &Scenario, b: &Built, pr: &PrismCtx, opts: &RunOptions) -> Result<()> {
    let mu: &Cocharacter = need(&b.mu, "mu", sc.command)?;
    let group = group_of(sc, mu.rank());
    let m_max = opts.depth.or(sc.depth).unwrap_or(1) as u32;
    let r = graded_quotients(&group, mu, pr, m_max, opts.budget.unwrap_or(ENUMERATION_BUDGET))?;
    rep.fold(Status::from_bool(r.all_match()));
    rep.put("graded_quotients", r);
    Ok(())
}

fn kernel_lemmas(rep: &mut Report, sc: &Scenario, pr: &PrismCtx, opts: &RunOptions) -> Result<()> {
    let depth = opts.depth.or(sc.depth).unwrap_or(2);
    let env = build_coproduct(pr, depth, opts.budget.unwrap_or(ENVELOPE_BUDGET) as usize)?;
    let checks = verify_kernel_lemmas(&env)?;
    for c in &checks {
        rep.fold(c.status.into());
    }
    rep.put("checks", checks);
    Ok(())
}
