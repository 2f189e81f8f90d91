use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use negdim_core::asymptotics::{predict_root_offset, root_offset_report, singularity_data};
use negdim_core::bigfloat::{decimal, decimal_digits};
use negdim_core::exact::{parse_decimal, parse_rational, PolyJson};
use negdim_core::hill::{dcal_grid, select_alpha, merge_interval, trace_trajectories, HillConfig, LevelSource};
use negdim_core::potential::PotentialSpec;
use negdim_core::roots::{classify_roots, roots_for_orders, Precision, RootConfig, RootLabel, RootSet, SolverRegistry};
use negdim_core::series::series_generate;
use negdim_core::spectral::ConstructionRegistry;
use negdim_core::spin::SpinLabel;
use negdim_core::verify::{SuiteRegistry, VerifyOptions};
use rug::Rational;

use crate::config::{emit, parse_orders, write_out, CliError, CliResult, Context, PrecisionPolicy, RunConfig};
use crate::plot;
use crate::{AsymArgs, Form, HillArgs, PerturbArgs, RootsArgs, SpectralArgs, VerifyArgs};

pub struct Global {
    pub timestamp: bool,
    pub verbosity: u8,
}

fn run_config(g: &Global, command: &str) -> CliResult<RunConfig> {
    let mut c = RunConfig::new(command)?;
    c.timestamp = g.timestamp;
    c.verbosity = g.verbosity;
    Ok(c)
}

fn rational_arg(flag: &str, s: &str) -> CliResult<Rational> {
    parse_decimal(s)
        .or_else(|_| parse_rational(s))
        .map_err(|_| CliError::Config(format!("{flag}: `{s}` is not a decimal or p/q rational")))
}

/// JSON outputs: files get the header as a first JSON object line; stdout
/// gets the bare data so it can be piped.
fn emit_json_lines(path: Option<&Path>, header: &[String], lines: &[String]) -> CliResult<()> {
    let mut text = String::new();
    if path.is_some() {
        let obj: serde_json::Map<String, serde_json::Value> = header
            .iter()
            .map(|l| match l.split_once(": ") {
                Some((k, v)) => (k.to_string(), serde_json::Value::String(v.to_string())),
                None => ("version".to_string(), serde_json::Value::String(l.clone())),
            })
            .collect();
        let _ = writeln!(text, "{}", serde_json::json!({ "header": obj }));
    }
    for l in lines {
        let _ = writeln!(text, "{l}");
    }
    write_out(path, &text)
}

// ---------------------------------------------------------------------------

pub fn spectral(g: &Global, a: SpectralArgs) -> CliResult<()> {
    let mut cfg = run_config(g, "spectral")?;
    let potential = if a.generic_w {
        let p = PotentialSpec::generic(a.two_j.max(1));
        cfg.potential = Some(p.name.clone());
        p
    } else {
        cfg.load_potential(&a.potential)?
    };
    cfg.param("two_j", a.two_j);
    cfg.param("construction", &a.construction);
    cfg.param("form", format!("{:?}", a.form));
    let reg = ConstructionRegistry::default();
    let c = reg.get(&a.construction).map_err(|e| CliError::Config(e.to_string()))?;
    let sp = c.build(SpinLabel::new(a.two_j), &potential).context(format!("spectral polynomial 2j={}", a.two_j))?;
    let poly = match a.form {
        Form::Det => sp.det(),
        Form::Tilde => sp.tilde(),
        Form::Monic => sp.monic(),
    };
    let json = PolyJson::from_mpoly(&poly).to_json_string();
    emit_json_lines(a.out.as_deref(), &cfg.header("exact"), &[json])
}

pub fn perturb(g: &Global, a: PerturbArgs) -> CliResult<()> {
    let mut cfg = run_config(g, "perturb")?;
    let potential = cfg.load_potential(&a.potential)?;
    cfg.orders = Some((0, a.orders));
    cfg.param("factored", a.factored);
    let d = match &a.specialize {
        None => None,
        Some(s) => {
            let v = s.strip_prefix("D=").unwrap_or(s);
            let d = rational_arg("--specialize", v)?;
            cfg.param("specialize", &d);
            Some(d)
        }
    };
    cfg.info(format!("generating E^(k)(D) for k ≤ {}", a.orders));
    let table = series_generate(&potential, a.orders).context("perturbation series")?;
    let mut lines = Vec::with_capacity(a.orders + 1);
    for k in 0..=a.orders {
        let poly = if a.factored && k >= 1 {
            table.p(k).ok_or_else(|| CliError::Core {
                context: format!("order {k}"),
                source: negdim_core::error::Error::InexactDivision,
            })?
        } else {
            table.term(k)
        };
        lines.push(match &d {
            Some(d) => serde_json::json!({ "k": k, "value": poly.eval(d).to_string() }).to_string(),
            None => PolyJson::from_dense(poly).to_json_string(),
        });
    }
    emit_json_lines(a.out.as_deref(), &cfg.header("exact"), &lines)
}

fn root_config(cfg: &mut RunConfig, bits: &str, solver: &str) -> CliResult<RootConfig> {
    SolverRegistry::default().get(solver).map_err(|e| CliError::Config(e.to_string()))?;
    let policy = PrecisionPolicy::parse(bits)?;
    cfg.precision = Some(policy);
    cfg.param("solver", solver);
    let precision = match policy {
        PrecisionPolicy::Auto => Precision::Auto,
        PrecisionPolicy::Fixed(b) => {
            if b > cfg.max_bits {
                return Err(CliError::Config(format!("--bits {b} exceeds the cap {} (NEGDIM_MAX_BITS)", cfg.max_bits)));
            }
            Precision::Fixed(b)
        }
    };
    Ok(RootConfig { precision, max_bits: cfg.max_bits, solver: solver.to_string() })
}

fn sweep(
    cfg: &RunConfig,
    potential: &PotentialSpec,
    orders: &[usize],
    rc: &RootConfig,
    window: f64,
) -> CliResult<Vec<RootSet>> {
    let hi = *orders.last().expect("non-empty");
    cfg.info(format!("series to k = {hi}"));
    let table = series_generate(potential, hi).context("perturbation series")?;
    cfg.info(format!("roots for {} orders", orders.len()));
    roots_for_orders(&table, orders, rc)
        .into_iter()
        .zip(orders)
        .map(|(r, k)| r.map(|rs| classify_roots(&rs, window)).context(format!("roots of P_{k}")))
        .collect()
}

fn precision_summary(policy: PrecisionPolicy, max_bits: u32, sets: &[RootSet]) -> String {
    let lo = sets.iter().map(|s| s.bits).min().unwrap_or(0);
    let hi = sets.iter().map(|s| s.bits).max().unwrap_or(0);
    match policy {
        PrecisionPolicy::Auto => format!("auto (cap {max_bits} bits), used {lo}..{hi} bits"),
        PrecisionPolicy::Fixed(b) => format!("fixed {b} bits"),
    }
}

fn residual_exponent(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "exact".into()
    } else {
        format!("{}", x.floor() as i64)
    }
}

pub fn roots(g: &Global, a: RootsArgs) -> CliResult<()> {
    let mut cfg = run_config(g, "roots")?;
    let potential = cfg.load_potential(&a.potential)?;
    let rc = root_config(&mut cfg, &a.bits, &a.solver)?;
    if !a.window.is_finite() || a.window <= 0.0 {
        return Err(CliError::Config("--window must be positive".into()));
    }
    cfg.param("window", a.window);
    let policy = cfg.precision.expect("set");

    if let Some(k) = a.scatter {
        if k < 1 {
            return Err(CliError::Config("--scatter needs k ≥ 1".into()));
        }
        cfg.orders = Some((k, k));
        cfg.param("scatter", k);
        let sets = sweep(&cfg, &potential, &[k], &rc, a.window)?;
        let prefix = a.out.clone().unwrap_or_else(|| PathBuf::from(format!("roots-k{k}")));
        let data = prefix.with_extension("dat");
        let script = prefix.with_extension("gp");
        let header = cfg.header(&precision_summary(policy, cfg.max_bits, &sets));
        emit(Some(&data), &header, &plot::roots_data(&sets[0]))?;
        let name = data.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        emit(Some(&script), &header, &plot::roots_script(&sets[0], &name))?;
        cfg.info(format!("wrote {} and {}", data.display(), script.display()));
        return Ok(());
    }

    let (lo, hi) = parse_orders(&a.orders, 5)?;
    let lo = lo.max(1);
    cfg.orders = Some((lo, hi));
    let orders: Vec<usize> = (lo..=hi).collect();
    let sets = sweep(&cfg, &potential, &orders, &rc, a.window)?;
    let mut body = String::from("k,re,im,label,residual_exponent\n");
    for rs in &sets {
        let digits = decimal_digits(rs.bits);
        for z in &rs.stable {
            let _ = writeln!(body, "{},{z},0,{},exact", rs.k, RootLabel::StableZero(*z as i32));
        }
        for r in &rs.roots {
            let (re, im) = r.value.to_decimal(digits);
            let _ = writeln!(body, "{},{re},{im},{},{}", rs.k, r.label, residual_exponent(r.residual_log2));
        }
    }
    emit(a.out.as_deref(), &cfg.header(&precision_summary(policy, cfg.max_bits, &sets)), &body)
}

pub fn asym(g: &Global, a: AsymArgs) -> CliResult<()> {
    let mut cfg = run_config(g, "asym")?;
    if a.m < 2 {
        return Err(CliError::Config("--M must be at least 2".into()));
    }
    let potential = cfg.load_potential(&a.potential)?;
    let (lo, hi) = parse_orders(&a.orders, 5)?;
    cfg.orders = Some((lo.max(1), hi));
    cfg.precision = Some(PrecisionPolicy::Auto);
    cfg.param("M", a.m);
    cfg.param("singularity_bits", a.bits);
    let s = singularity_data(a.m, &potential, a.bits).context(format!("singularity data for M={}", a.m))?;
    let rc = RootConfig { max_bits: cfg.max_bits, ..Default::default() };
    let orders: Vec<usize> = (lo.max(1)..=hi).collect();
    let sets = sweep(&cfg, &potential, &orders, &rc, negdim_core::roots::DEFAULT_WINDOW)?;
    let rep = root_offset_report(&sets, &s).context("offset report")?;

    let mut header = cfg.header(&precision_summary(PrecisionPolicy::Auto, cfg.max_bits, &sets));
    let d = 30;
    header.push(format!("E0: {} ({})", decimal(&s.e0_real().context("E0")?, d), s.provenance));
    header.push(format!("g0: {}", decimal(&s.g0_real().context("g0")?, d)));
    header.push(format!("c: {}", decimal(&s.c_real().context("c")?, d)));
    header.push(format!("monotone: {}, one-sided: {}", rep.monotone, rep.one_sided));
    let mut body = String::from("k,exact,predicted,ratio,bits\n");
    for r in &rep.rows {
        let digits = decimal_digits(r.bits).min(40);
        let _ = writeln!(
            body,
            "{},{},{},{},{}",
            r.k,
            decimal(&r.exact, digits),
            decimal(&r.predicted, digits),
            decimal(&r.ratio, 12),
            r.bits
        );
    }
    if rep.rows.is_empty() {
        eprintln!("negdim: warning: no real cluster(-{}) offsets in orders {lo}..{hi}", 2 * a.m);
    }
    if g.verbosity > 0 {
        if let Some(r) = rep.rows.first() {
            let p = predict_root_offset(&s, r.k).context("prediction")?;
            eprintln!("k={}: predicted offset {}", r.k, decimal(&p, 12));
        }
    }
    emit(a.report.as_deref(), &header, &body)
}

fn parse_range(s: &str) -> CliResult<(Rational, Rational, Rational)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!("--Dcal-range expects from:to:step, got `{s}`")));
    }
    Ok((
        rational_arg("--Dcal-range", parts[0])?,
        rational_arg("--Dcal-range", parts[1])?,
        rational_arg("--Dcal-range", parts[2])?,
    ))
}

pub fn hill(g: &Global, a: HillArgs) -> CliResult<()> {
    let mut cfg = run_config(g, "hill")?;
    let potential = cfg.load_potential(&a.potential)?;
    let (from, to, step) = parse_range(&a.dcal_range)?;
    let grid = dcal_grid(&from, &to, &step).map_err(|e| CliError::Config(e.to_string()))?;
    let coupling = rational_arg("--g", &a.g)?;
    if a.levels == 0 || a.truncation < 2 * a.levels || a.bits < 64 || a.bits > cfg.max_bits {
        return Err(CliError::Config(format!(
            "need levels ≥ 1, truncation ≥ 2·levels and 64 ≤ bits ≤ {}",
            cfg.max_bits
        )));
    }
    let alpha = match &a.alpha {
        Some(s) => {
            let v = rational_arg("--alpha", s)?;
            if v.cmp0().is_le() {
                return Err(CliError::Config("--alpha must be positive".into()));
            }
            Some(v)
        }
        None => None,
    };
    let mut hc = HillConfig { bits: a.bits, truncation: a.truncation, delta_n: a.delta_n, alpha, ..Default::default() };
    let alpha_used = match &hc.alpha {
        Some(v) => v.clone(),
        None => {
            let samples = [grid[0].clone(), grid[grid.len() / 2].clone(), grid[grid.len() - 1].clone()];
            select_alpha(&samples, &potential, &coupling, a.levels, &hc).context("choosing α")?
        }
    };
    hc.alpha = Some(alpha_used.clone());
    cfg.precision = Some(PrecisionPolicy::Fixed(a.bits));
    for (k, v) in [
        ("dcal_range", format!("{from}:{to}:{step}")),
        ("g", coupling.to_string()),
        ("levels", a.levels.to_string()),
        ("truncation", a.truncation.to_string()),
        ("delta_n", a.delta_n.to_string()),
        ("alpha", alpha_used.to_string()),
    ] {
        cfg.param(k, v);
    }
    cfg.info(format!("{} grid points, {} levels", grid.len(), a.levels));
    let tracks = trace_trajectories(a.levels, &grid, &potential, &coupling, &hc).context("Hill trajectories")?;

    let mut header = cfg.header(&format!("fixed {} bits, N = {} vs {}", a.bits, a.truncation, a.truncation + a.delta_n));
    header.push(format!("alpha: {alpha_used}"));
    let mut body = String::from("dcal,level,re,im,agreement_digits,converged,merged,ambiguous,source\n");
    let mut unconverged = 0usize;
    for track in &tracks {
        for p in track {
            if !p.converged && !p.merged {
                unconverged += 1;
            }
            let _ = writeln!(
                body,
                "{},{},{},{},{},{},{},{},{}",
                decimal_exact(&p.dcal),
                p.level,
                decimal(&p.e, 15),
                decimal(&p.im, 15),
                p.agreement_digits.map_or("".into(), |d| format!("{d:.1}")),
                p.converged,
                p.merged,
                p.ambiguous,
                match p.source {
                    LevelSource::Hill => "hill",
                    LevelSource::Algebraic => "algebraic",
                }
            );
        }
        if let Some((lo, hi)) = merge_interval(track) {
            header.push(format!(
                "level {} leaves the real axis between Dcal = {} and {}",
                track[0].level,
                decimal_exact(&lo),
                decimal_exact(&hi)
            ));
        }
    }
    if unconverged > 0 {
        eprintln!("negdim: warning: {unconverged} real points below the {} digit agreement target", hc.digits);
    }
    emit(a.out.as_deref(), &header, &body)?;
    if let Some(out) = &a.out {
        let script = out.with_extension("gp");
        let name = out.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        emit(Some(&script), &header, &plot::hill_script(&name, a.levels, &coupling))?;
    }
    Ok(())
}

/// Short decimal for grid values (terminating decimals print exactly).
fn decimal_exact(q: &Rational) -> String {
    let mut den = q.denom().clone();
    let mut scale = 0u32;
    for p in [2u32, 5] {
        while den.is_divisible_u(p) {
            den /= p;
        }
    }
    if den != 1 {
        return format!("{}", q.to_f64());
    }
    let mut x = q.clone();
    while *x.denom() != 1 {
        x *= 10;
        scale += 1;
    }
    let n = x.numer().clone();
    if scale == 0 {
        return n.to_string();
    }
    let neg = n < 0;
    let digits = n.abs().to_string();
    let pad = (scale as usize + 1).saturating_sub(digits.len());
    let digits = format!("{}{digits}", "0".repeat(pad));
    let (int, frac) = digits.split_at(digits.len() - scale as usize);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

pub fn verify(g: &Global, a: VerifyArgs) -> CliResult<()> {
    let reg = SuiteRegistry::default();
    if a.list {
        for s in reg.iter() {
            println!("{:<20} {}{}", s.name(), s.summary(), if s.heavy() { " [heavy]" } else { "" });
        }
        return Ok(());
    }
    let mut cfg = run_config(g, "verify")?;
    let mut opts = VerifyOptions::default();
    if let Some(v) = a.max_m {
        opts.max_m = v;
    }
    if let Some(v) = a.tensor_m {
        opts.tensor_m = v;
    }
    if let Some(v) = a.max_two_j {
        opts.max_two_j = v;
    }
    if let Some(v) = a.series_k {
        opts.series_k = v;
    }
    if let Some(v) = a.sweep_k {
        opts.sweep_k = v;
    }
    if let Some(v) = a.seed {
        opts.seed = v;
    }
    let names: Vec<String> = if a.all {
        reg.iter().filter(|s| a.heavy || !s.heavy()).map(|s| s.name().to_string()).collect()
    } else if a.suites.is_empty() {
        return Err(CliError::Config(format!("name a suite or pass --all; suites: {}", reg.names().join(", "))));
    } else {
        a.suites.clone()
    };
    for n in &names {
        reg.get(n).map_err(|e| CliError::Config(e.to_string()))?;
    }
    for (k, v) in [
        ("suites", names.join(",")),
        ("max_m", opts.max_m.to_string()),
        ("tensor_m", opts.tensor_m.to_string()),
        ("max_two_j", opts.max_two_j.to_string()),
        ("series_k", opts.series_k.to_string()),
        ("sweep_k", opts.sweep_k.to_string()),
        ("seed", opts.seed.to_string()),
    ] {
        cfg.param(k, v);
    }

    let mut body = String::new();
    let mut failed = Vec::new();
    for n in &names {
        let rep = reg.run(n, &opts).context(format!("suite {n}"))?;
        let _ = writeln!(body, "== {} ({:.1} s)", rep.suite, rep.seconds);
        for c in &rep.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(body, "  {mark}  {}  {}", c.name, c.detail);
            if !c.passed {
                failed.push(format!("{}: {}", rep.suite, c.name));
            }
        }
        if a.out.is_none() {
            write_out(None, &std::mem::take(&mut body))?;
        }
    }
    let _ = writeln!(body, "{} suite(s), {} failing check(s)", names.len(), failed.len());
    emit(a.out.as_deref(), &if a.out.is_some() { cfg.header("exact and per-suite") } else { Vec::new() }, &body)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values_print_exactly() {
        assert_eq!(decimal_exact(&Rational::from((-13, 5))), "-2.6");
        assert_eq!(decimal_exact(&Rational::from((1, 20))), "0.05");
        assert_eq!(decimal_exact(&Rational::from(-8)), "-8");
        assert_eq!(decimal_exact(&Rational::from((-1, 40))), "-0.025");
    }

    #[test]
    fn range_parses() {
        let (a, b, c) = parse_range("-8:4:0.05").unwrap();
        assert_eq!((a, b, c), (Rational::from(-8), Rational::from(4), Rational::from((1, 20))));
        assert!(parse_range("1:2").is_err());
    }
}
