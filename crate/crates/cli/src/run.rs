use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use qpcocycle::analytic::{
    default_eps_grid, fit_transversality, locate_zeros, torus_zeros, AnnulusContour, TrigPoly, TORUS_ZERO_TOL,
};
use qpcocycle::arithmetic::{fit_diophantine, growth_check, Frequency};
use qpcocycle::checks;
use qpcocycle::cocycle::{lyapunov, renorm_le};
use qpcocycle::lab::{
    continuity_scan, frequency_scan, ldt_experiment, perturbations, real, LdtConfig, LdtResult, Table,
};

use crate::config::{CocycleSpec, Command, Parameter, RunConfig, ZeroTarget};
use crate::Failure;

pub fn run(cmd: Command, cfg: &RunConfig, out: &Path) -> Result<(), Failure> {
    let emit = Emitter::new(cfg, out);
    match cmd {
        Command::Le => le(cfg, &emit),
        Command::Scan => scan(cfg, &emit),
        Command::Ldt => ldt(cfg, &emit),
        Command::Zeros => zeros(cfg, &emit),
        Command::Cf => cf(cfg, &emit),
        Command::Check => check(),
    }
}

struct Emitter<'a> {
    cfg: &'a RunConfig,
    dir: &'a Path,
    hash: String,
    stamp: String,
}

impl<'a> Emitter<'a> {
    fn new(cfg: &'a RunConfig, dir: &'a Path) -> Self {
        Self {
            cfg,
            dir,
            hash: cfg.hash(),
            stamp: chrono::Utc::now().format("%Y%m%dT%H%M%S%3fZ").to_string(),
        }
    }

    fn path(&self, experiment: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{experiment}-{}-{}.{ext}", self.stamp, self.cfg.seed))
    }

    fn csv(&self, experiment: &str, table: &Table) -> Result<(), Failure> {
        std::fs::create_dir_all(self.dir)?;
        let p = self.path(experiment, "csv");
        let f = std::io::BufWriter::new(std::fs::File::create(&p)?);
        table.write(f, &[format!("config-sha256 {}", self.hash)])?;
        println!("{}", p.display());
        Ok(())
    }

    fn json(&self, experiment: &str, mut body: Value) -> Result<(), Failure> {
        std::fs::create_dir_all(self.dir)?;
        let p = self.path(experiment, "json");
        body["experiment"] = json!(experiment);
        body["seed"] = json!(self.cfg.seed);
        body["config_sha256"] = json!(self.hash);
        body["config"] = serde_json::to_value(self.cfg).expect("config serializes");
        let text = serde_json::to_string_pretty(&body).expect("summary serializes");
        std::fs::write(&p, text + "\n")?;
        println!("{}", p.display());
        Ok(())
    }
}

fn cocycle_spec(cfg: &RunConfig) -> &CocycleSpec {
    cfg.cocycle.as_ref().expect("validated")
}

fn params(spec: &CocycleSpec) -> Vec<(&'static str, f64)> {
    match spec {
        CocycleSpec::Harper { lambda1, lambda2, lambda3, energy } => {
            vec![("lambda1", *lambda1), ("lambda2", *lambda2), ("lambda3", *lambda3), ("energy", *energy)]
        }
        CocycleSpec::AlmostMathieu { lambda, energy } => vec![("lambda", *lambda), ("energy", *energy)],
        CocycleSpec::Jacobi { energy, .. } => vec![("energy", *energy)],
        CocycleSpec::Raw { .. } => vec![],
    }
}

fn le(cfg: &RunConfig, emit: &Emitter) -> Result<(), Failure> {
    let freq = cfg.frequency()?;
    let spec = cocycle_spec(cfg);
    let coc = spec.build(&freq, cfg.domain())?;
    let est = lyapunov(&coc, &cfg.budget.schedule, cfg.budget.grid)?;
    let lp = renorm_le(&coc, &est)?;
    let ps = params(spec);
    let mut t = Table::new(
        ["beta"]
            .into_iter()
            .chain(ps.iter().map(|p| p.0))
            .chain(["n", "grid", "L", "L_prime", "stderr"]),
    );
    let mut row = vec![real(freq.beta())];
    row.extend(ps.iter().map(|p| real(p.1)));
    row.extend([est.n.to_string(), est.grid.to_string(), real(est.value), real(lp), real(est.stderr)]);
    t.push(row);
    emit.csv("le", &t)?;
    emit.json("le", json!({ "estimate": est, "l_prime": lp }))
}

fn path(start: f64, stop: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| start + (stop - start) * i as f64 / (points - 1) as f64).collect()
}

fn scan(cfg: &RunConfig, emit: &Emitter) -> Result<(), Failure> {
    let s = cfg.scan.as_ref().expect("validated");
    let spec = cocycle_spec(cfg);
    let dom = cfg.domain();
    let freq = cfg.frequency()?;
    if s.set == [Parameter::Beta] {
        let r = frequency_scan(|f: &Frequency| spec.build(f, dom), &freq, &s.denominators, s.rational_grid, &cfg.le_config())
            .map_err(|e| match e {
                qpcocycle::Error::InvalidArgument(m) => Failure::Config(format!("scan.denominators: {m}")),
                e => e.into(),
            })?;
        emit.csv("frequency-scan", &Table::from(&r))?;
        emit.json("frequency-scan", json!({ "label": r.label.to_string(), "gaps": r.gaps, "scan": r.scan }))
    } else {
        let pts = path(s.start, s.stop, s.points);
        let r = continuity_scan(|t| spec.with(&s.set, t).build(&freq, dom), &pts, &cfg.le_config())?;
        emit.csv("scan", &Table::from(&r))?;
        emit.json("scan", json!({ "modulus": r.modulus, "jumps": r.jumps(), "candidates": r.candidates }))
    }
}

fn ldt(cfg: &RunConfig, emit: &Emitter) -> Result<(), Failure> {
    let l = cfg.ldt.as_ref().expect("validated");
    let freq = cfg.frequency()?;
    let coc = cocycle_spec(cfg).build(&freq, cfg.domain())?;
    let lc = LdtConfig { kappa: l.kappa, grid: l.grid, seed: cfg.seed, policy: l.policy, q_min: l.q_min };
    let known = freq.denominators();
    if let Some(q) = l.q.iter().find(|q| !known.contains(q)) {
        return Err(Failure::Config(format!("ldt.q: {q} is not a convergent denominator of the frequency")));
    }
    let map = |e| match e {
        qpcocycle::Error::InsufficientQ { needed, have } => {
            Failure::Config(format!("ldt.q: need at least {needed} usable denominators, have {have}"))
        }
        e => Failure::from(e),
    };
    let mut runs: Vec<(String, LdtResult)> = vec![("base".into(), ldt_experiment(&coc, &l.q, &lc).map_err(map)?)];
    for (i, p) in perturbations(&coc, l.gamma, l.perturbations, cfg.seed).iter().enumerate() {
        runs.push((format!("perturbed_{}", i + 1), ldt_experiment(p, &l.q, &lc).map_err(map)?));
    }
    let c = runs[0].1.fitted_c;
    let mut t = Table::new(["cocycle"].into_iter().chain(Table::from(&runs[0].1).header.iter().map(String::as_str)));
    for (name, r) in &runs {
        for row in Table::from(r).rows {
            t.push(std::iter::once(name.clone()).chain(row).collect());
        }
    }
    emit.csv("ldt", &t)?;
    let per: Vec<Value> = runs
        .iter()
        .map(|(name, r)| {
            json!({
                "cocycle": name,
                "fitted_c": r.fitted_c,
                "bounded_by_base_c": r.bounded_by(c),
                "non_increasing": r.non_increasing(),
                "dropped_q": r.dropped_q,
                "phase_offset": r.phase_offset,
            })
        })
        .collect();
    emit.json("ldt", json!({ "fitted_c": c, "runs": per }))
}

fn zeros(cfg: &RunConfig, emit: &Emitter) -> Result<(), Failure> {
    let z = cfg.zeros.clone().unwrap_or(crate::config::ZerosConfig { target: None, f: None, tol: 1e-8 });
    let f: TrigPoly = match (&z.f, z.target.unwrap_or(ZeroTarget::Det)) {
        (Some(f), _) => f.clone(),
        (None, ZeroTarget::Det) => cocycle_spec(cfg).build(&cfg.frequency()?, cfg.domain())?.det().clone(),
        (None, ZeroTarget::C) => cocycle_spec(cfg)
            .coefficient_c(cfg.frequency()?.beta())
            .ok_or_else(|| Failure::Config("zeros.target: cocycle has no coefficient c".into()))?,
    };
    let contour = AnnulusContour::from_strip(cfg.domain());
    let strip = locate_zeros(&f, &contour, z.tol)?;
    let torus = torus_zeros(&f)?;
    let profile = fit_transversality(&f, &default_eps_grid())?;
    let mut t = Table::new(["re", "im", "multiplicity", "on_torus"]);
    for c in &strip {
        let on = c.location.im.abs() <= TORUS_ZERO_TOL;
        t.push(vec![real(c.location.re), real(c.location.im), c.multiplicity.to_string(), on.to_string()]);
    }
    emit.csv("zeros", &t)?;
    emit.json(
        "zeros",
        json!({
            "function": f,
            "strip_zeros": strip.iter().map(|c| json!({"re": c.location.re, "im": c.location.im, "multiplicity": c.multiplicity})).collect::<Vec<_>>(),
            "torus_zero_count": torus.iter().map(|c| c.multiplicity).sum::<usize>(),
            "transversality": {
                "alpha": profile.alpha,
                "epsilon0": profile.epsilon0,
                "max_multiplicity": profile.max_multiplicity,
                "samples": profile.samples,
            },
        }),
    )
}

fn cf(cfg: &RunConfig, emit: &Emitter) -> Result<(), Failure> {
    let freq = cfg.frequency()?;
    let mut t = Table::new(["n", "a_n", "p_n", "q_n", "scaled_error"]);
    for c in freq.convergents().iter().take(cfg.cf.rows) {
        t.push(vec![c.n.to_string(), c.a.to_string(), c.p.to_string(), c.q.to_string(), real(freq.scaled_error(c))]);
    }
    emit.csv("cf", &t)?;
    let fit = if freq.is_rational() {
        json!({ "skipped": "rational frequency is not Diophantine" })
    } else {
        let p = fit_diophantine(&freq, cfg.cf.r, cfg.cf.j_max)?;
        json!({ "b": p.b, "r": p.r, "j_max": p.j_max, "growth_check": growth_check(&freq, &p) })
    };
    emit.json("cf", json!({ "beta": freq.beta(), "terminated": freq.is_rational(), "diophantine": fit }))
}

fn check() -> Result<(), Failure> {
    let outcomes = checks::run_all();
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    for o in &outcomes {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} of {} invariants failed", outcomes.len())));
    }
    Ok(())
}
