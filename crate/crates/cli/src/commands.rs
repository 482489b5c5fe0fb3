use std::fs;
use std::path::{Path, PathBuf};

use nupair_core::arith::{convolve, csv, dirichlet_inverse};
use nupair_core::density::{
    c_nu_constant, decade_checkpoints, euler_product_support_density, multiples_density, sieved_density_exact,
    sieved_density_truncated, support_density, EulerProductResult, ResidueSieveSpec, SieveEntry, SieveLimits,
    SieveTail,
};
use nupair_core::pairs::{
    classify_support, make_multiplicative_pair_with, make_pair, mean_value_series, single_divisor_witness,
    truncated_convolution, uncertainty_report, verify_density_lower_bound, verify_mean_value_convergence,
    MeanValueSeries, NuPair, Side,
};
use nupair_core::{
    ArithFunc, Boundedness, Complex64, MultiplicativeSpec, Rational, Scalar, TailDeclaration, ValueMode, ZeroTest,
};

use crate::error::CliError;
use crate::report::{emit, write_atomic, Report, Row};
use crate::specfile::{load_spec, Definition, FunctionSpec};

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub floating: bool,
    pub zero_test: ZeroTest,
    pub max_n: u64,
}

/// Conversion of exact spec-file definitions into the working scalar type.
pub trait Lift: Scalar {
    fn lift_spec(m: &MultiplicativeSpec) -> MultiplicativeSpec<Self>;
    fn lift_table(t: &ArithFunc) -> ArithFunc<Self>;
}

impl Lift for Rational {
    fn lift_spec(m: &MultiplicativeSpec) -> MultiplicativeSpec<Self> {
        m.clone()
    }
    fn lift_table(t: &ArithFunc) -> ArithFunc<Self> {
        t.clone()
    }
}

impl Lift for Complex64 {
    fn lift_spec(m: &MultiplicativeSpec) -> MultiplicativeSpec<Self> {
        m.to_floating()
    }
    fn lift_table(t: &ArithFunc) -> ArithFunc<Self> {
        t.map(Complex64::from_rational)
    }
}

impl Settings {
    fn zero_test_for<V: Scalar>(&self) -> ZeroTest {
        match V::MODE {
            ValueMode::Exact => ZeroTest::Exact,
            ValueMode::Floating => self.zero_test,
        }
    }

    fn check_limit(&self, n: u64) -> Result<usize, CliError> {
        if n == 0 || n > self.max_n {
            return Err(nupair_core::Error::Range { what: "N", value: n, limit: self.max_n }.into());
        }
        Ok(n as usize)
    }
}

fn tabulate_in<V: Lift>(spec: &FunctionSpec, limit: usize, settings: &Settings) -> Result<ArithFunc<V>, CliError> {
    let table = match &spec.definition {
        Definition::Multiplicative(m) => V::lift_spec(m).tabulate(limit)?,
        Definition::Table(_) => V::lift_table(&spec.tabulate(limit)?),
    };
    Ok(table.with_zero_test(settings.zero_test_for::<V>())?)
}

fn nu_of<V: Lift>(spec: &FunctionSpec) -> Result<MultiplicativeSpec<V>, CliError> {
    spec.multiplicative()
        .map(V::lift_spec)
        .ok_or_else(|| CliError::Usage(format!("'{}' must be multiplicative to serve as nu", spec.name)))
}

pub fn tabulate(spec: &Path, n: u64, out: Option<&Path>, settings: &Settings) -> Result<(), CliError> {
    let limit = settings.check_limit(n)?;
    let spec = load_spec(spec)?;
    let text = if settings.floating {
        csv::table_to_string(&tabulate_in::<Complex64>(&spec, limit, settings)?)
    } else {
        csv::table_to_string(&tabulate_in::<Rational>(&spec, limit, settings)?)
    };
    Ok(emit(out, &text)?)
}

fn convolve_in<V: Lift>(f: &FunctionSpec, g: &FunctionSpec, limit: usize, s: &Settings) -> Result<String, CliError> {
    let h = convolve(&tabulate_in::<V>(f, limit, s)?, &tabulate_in::<V>(g, limit, s)?)?;
    Ok(csv::table_to_string(&h))
}

pub fn convolve_cmd(f: &Path, g: &Path, n: u64, out: Option<&Path>, settings: &Settings) -> Result<(), CliError> {
    let limit = settings.check_limit(n)?;
    let (f, g) = (load_spec(f)?, load_spec(g)?);
    let text = if settings.floating {
        convolve_in::<Complex64>(&f, &g, limit, settings)?
    } else {
        convolve_in::<Rational>(&f, &g, limit, settings)?
    };
    Ok(emit(out, &text)?)
}

fn invert_in<V: Lift>(f: &FunctionSpec, limit: usize, s: &Settings) -> Result<String, CliError> {
    Ok(csv::table_to_string(&dirichlet_inverse(&tabulate_in::<V>(f, limit, s)?)?))
}

pub fn invert(f: &Path, n: u64, out: Option<&Path>, settings: &Settings) -> Result<(), CliError> {
    let limit = settings.check_limit(n)?;
    let f = load_spec(f)?;
    let text = if settings.floating {
        invert_in::<Complex64>(&f, limit, settings)?
    } else {
        invert_in::<Rational>(&f, limit, settings)?
    };
    Ok(emit(out, &text)?)
}

#[derive(Debug, Clone)]
pub struct PairOptions {
    pub f: PathBuf,
    pub nu: PathBuf,
    pub n: u64,
    pub density_x: Option<u64>,
    pub checkpoints: Vec<u64>,
    pub mean_value: bool,
    pub classes: bool,
    pub verify_bound: bool,
    pub truncate: Option<u64>,
    pub primes: u64,
    pub slack: f64,
    pub f_tail: Option<TailDeclaration>,
    pub g_tail: Option<TailDeclaration>,
    pub out: PathBuf,
}

/// Outcome of a command that produced a report; `failed` lists checks that
/// ran but did not hold.
pub struct Produced {
    pub report: Report,
    pub failed: Vec<String>,
}

fn density_rows<V: Scalar>(report: &mut Report, item: &str, f: &ArithFunc<V>, x: u64, cps: &[u64]) -> Result<(), CliError> {
    let est = support_density(&f.support(), x, cps)?;
    for cp in &est.checkpoints {
        report.push(Row::new("density", item, cp.exact_ratio()).at(cp.x).mode(f.mode(), f.zero_test()));
    }
    Ok(())
}

fn mean_rows<V: Scalar>(report: &mut Report, item: &str, h: &ArithFunc<V>, s: &MeanValueSeries) {
    for p in &s.points {
        let (value, m) = match &p.exact {
            Some(e) => (e.to_string(), ValueMode::Exact),
            None => (p.mean.to_string(), ValueMode::Floating),
        };
        let mut row = Row::new("mean", item, value).at(p.x).mode(m, h.zero_test());
        if let Some(y) = s.truncation {
            row = row.cutoff(y);
        }
        report.push(row);
    }
}

fn trend(s: &MeanValueSeries) -> &'static str {
    if s.points.len() < 2 {
        "single checkpoint"
    } else if s.is_strictly_increasing() {
        "strictly increasing"
    } else if s.points.windows(2).all(|w| w[1].mean < w[0].mean) {
        "strictly decreasing"
    } else {
        "not monotone"
    }
}

fn run_pair<V: Lift>(o: &PairOptions, settings: &Settings) -> Result<Produced, CliError> {
    let limit = settings.check_limit(o.n)?;
    let f_spec = load_spec(&o.f)?;
    let nu_file = load_spec(&o.nu)?;
    let nu = nu_of::<V>(&nu_file)?;
    let zt = settings.zero_test_for::<V>();
    let pair: NuPair<V> = match f_spec.multiplicative() {
        Some(m) => make_multiplicative_pair_with(&V::lift_spec(m), &nu, limit, zt)?,
        None => make_pair(tabulate_in::<V>(&f_spec, limit, settings)?, &nu, limit)?,
    }
    .with_f_tail(o.f_tail.unwrap_or(f_spec.support_tail))
    .with_g_tail(o.g_tail.unwrap_or(TailDeclaration::Unknown));

    let x = o.density_x.unwrap_or(o.n);
    if x == 0 || x > o.n {
        return Err(nupair_core::Error::Range { what: "density x", value: x, limit: o.n }.into());
    }
    let cps = if o.checkpoints.is_empty() { decade_checkpoints(x) } else { o.checkpoints.clone() };

    let mut r = Report::default();
    let mut failed = Vec::new();
    r.note(format!("pair: f = {}, nu = {}, N = {}", f_spec.name, nu.name(), o.n));
    r.note(format!("mode: {}", V::MODE));
    r.note(format!(
        "zero test: {}",
        if zt == ZeroTest::Exact { "exact".to_string() } else { zt.describe() }
    ));
    r.note(format!(
        "declared tails: supp f {}, supp g {}",
        pair.f_tail(),
        pair.g_tail()
    ));

    density_rows(&mut r, "supp_f", pair.f(), x, &cps)?;
    density_rows(&mut r, "supp_g", pair.g(), x, &cps)?;
    let g_est = support_density(&pair.g().support(), x, &[])?;
    r.note(format!(
        "supp(g) density at x = {x}: {} = {}",
        g_est.exact_value(),
        g_est.value()
    ));

    if pair.is_nonzero() {
        let u = uncertainty_report(&pair, &cps)?;
        for (i, &cx) in u.checkpoints.iter().enumerate() {
            let zt = pair.f().zero_test();
            r.push(Row::new("reciprocal_sum", "supp_f", u.f_sums[i]).at(cx).mode(ValueMode::Floating, zt));
            r.push(Row::new("reciprocal_sum", "supp_g", u.g_sums[i]).at(cx).mode(ValueMode::Floating, zt));
        }
        match (&u.thin_side, &u.other_side) {
            (Some(thin), Some(c)) => {
                let (thin, other) = match thin {
                    Side::F => ("supp f", "supp g"),
                    Side::G => ("supp g", "supp f"),
                };
                r.note(format!(
                    "{thin} declared thin; {other}: density {} (previous checkpoint {}), \
                     stable above 0.9x: {}, reciprocal-sum growth >= 0.5 d log(ratio): {}",
                    c.density,
                    c.previous_density,
                    c.density_stable(),
                    c.growth_consistent()
                ));
                if !c.consistent() {
                    failed.push(format!("{other} does not look like a set of positive density"));
                }
            }
            _ if u.both_declared_thin => {
                r.note("both supports declared thin: impossible for a nonzero pair");
                failed.push("both supports declared thin".into());
            }
            _ => r.note("neither support declared thin; no thin/positive diagnostic"),
        }
    } else {
        r.note("f vanishes on [1, N]; reciprocal-sum diagnostic skipped");
    }

    if o.classes {
        let dec = classify_support(&pair, &cps)?;
        for c in &dec.classes {
            for (i, &cx) in dec.checkpoints.iter().enumerate() {
                r.push(Row::new("class", c.label(), c.counts[i]).at(cx).mode(pair.f().mode(), pair.f().zero_test()));
            }
        }
        for (i, &cx) in dec.checkpoints.iter().enumerate() {
            r.push(Row::new("class", "unclassified", dec.unclassified[i]).at(cx));
        }
        r.note(format!("classes (S|T): {}", dec.classes.len()));
        let w = single_divisor_witness(&pair, x)?;
        r.push(Row::new("witness", format!("d={}", w.d), w.members).at(x));
        r.note(format!(
            "single-divisor witness: d = {}, {} members up to {x} (density {}), inside supp g: {}",
            w.d,
            w.members,
            w.density,
            w.contained_in_supp_g()
        ));
        if !w.contained_in_supp_g() {
            failed.push(format!("witness member {} is outside supp g", w.first_violation.unwrap()));
        }
    }

    if o.verify_bound {
        let b = verify_density_lower_bound(&pair, o.primes, x, o.slack)?;
        let mode = (pair.g().mode(), pair.g().zero_test());
        r.push(Row::new("lower_bound", "c_nu", b.c_nu.value).cutoff(o.primes).tail(b.c_nu.tail_log_bound));
        r.push(
            Row::new("lower_bound", "support_sum", b.support_reciprocal_sum)
                .mode(ValueMode::Floating, mode.1)
                .tail(pair.f_tail()),
        );
        r.push(Row::new("lower_bound", "bound", b.c_nu_over_sum).cutoff(o.primes));
        r.push(Row::new("lower_bound", "empirical", b.empirical_density).at(x).mode(ValueMode::Floating, mode.1));
        r.push(Row::new("lower_bound", "margin", b.margin).at(x));
        r.push(Row::new("lower_bound", "slack", b.slack));
        r.note(format!(
            "lower bound: d(supp g) at {x} = {} vs C_nu / sum 1/n = {} / {} = {} (P = {}, log tail {}), \
             slack {}: {}",
            b.empirical_density,
            b.c_nu.lower_bound(),
            b.support_reciprocal_sum,
            b.c_nu_over_sum,
            o.primes,
            b.c_nu.tail_log_bound,
            b.slack,
            if b.holds() { "holds" } else { "FAILS" }
        ));
        if !b.holds() {
            failed.push("density lower bound".into());
        }
    }

    if o.mean_value || o.truncate.is_some() {
        let s = mean_value_series(pair.g(), &cps)?;
        mean_rows(&mut r, "g", pair.g(), &s);
        let t = trend(&s);
        let flag = if nu.boundedness() == Boundedness::Unbounded && t == "strictly increasing" {
            "; no finite mean value (nu declared unbounded)"
        } else {
            ""
        };
        r.note(format!("mean of |g|: {} at x = {}, series {t}{flag}", s.last().mean, s.last().x));
        if let Some(y) = o.truncate {
            let gy = truncated_convolution(pair.f(), &nu, y, limit)?;
            let sy = mean_value_series(&gy, &cps)?.with_truncation(y);
            mean_rows(&mut r, &format!("g_{y}"), &gy, &sy);
            r.note(format!("mean of |g_{y}|: {} at x = {}, series {}", sy.last().mean, sy.last().x, trend(&sy)));
        }
    }
    Ok(Produced { report: r, failed })
}

pub fn pair(o: &PairOptions, settings: &Settings) -> Result<Vec<String>, CliError> {
    if !o.slack.is_finite() || o.slack < 0.0 {
        return Err(CliError::Usage(format!("slack must be finite and >= 0, got {}", o.slack)));
    }
    let produced = if settings.floating {
        run_pair::<Complex64>(o, settings)?
    } else {
        run_pair::<Rational>(o, settings)?
    };
    let mut report = produced.report;
    report.note(format!("slack: {}; prime cutoff: {}", o.slack, o.primes));
    fs::create_dir_all(&o.out)?;
    write_atomic(&o.out.join("report.csv"), &report.csv())?;
    write_atomic(&o.out.join("summary.txt"), &report.summary_text())?;
    print!("{}", report.summary_text());
    Ok(produced.failed)
}

fn euler_rows(r: &mut Report, section: &str, e: &EulerProductResult) {
    r.push(Row::new(section, "value", e.value).cutoff(e.prime_cutoff).tail(e.tail_log_bound));
    r.push(Row::new(section, "lower_bound", e.lower_bound()).cutoff(e.prime_cutoff));
    r.push(Row::new(section, "upper_bound", e.upper_bound()).cutoff(e.prime_cutoff));
}

pub enum DensityCommand {
    Sieve {
        entries: Vec<String>,
        file: Option<PathBuf>,
        truncate: Option<usize>,
        tail_constants: Vec<f64>,
        tail_beyond: Option<f64>,
    },
    Multiples(Vec<u64>),
    Euler { spec: PathBuf, primes: u64 },
    Cnu { spec: PathBuf, primes: u64 },
}

pub fn density(cmd: &DensityCommand, out: Option<&Path>) -> Result<(), CliError> {
    let mut r = Report::default();
    let limits = SieveLimits::default();
    match cmd {
        DensityCommand::Sieve { entries, file, truncate, tail_constants, tail_beyond } => {
            let mut parsed = match file {
                Some(p) => ResidueSieveSpec::from_csv(&fs::read_to_string(p)?)?.entries().to_vec(),
                None => Vec::new(),
            };
            for e in entries {
                parsed.push(e.parse::<SieveEntry>()?);
            }
            if parsed.is_empty() {
                return Err(CliError::Usage("no sieve entries given".into()));
            }
            let mut spec = ResidueSieveSpec::new(parsed);
            if !tail_constants.is_empty() || tail_beyond.is_some() {
                spec = spec.with_tail(SieveTail {
                    constants: tail_constants.clone(),
                    beyond: tail_beyond.unwrap_or(0.0),
                })?;
            }
            match truncate {
                Some(k) => {
                    let t = sieved_density_truncated(&spec, *k, &limits)?;
                    let mode = (ValueMode::Exact, ZeroTest::Exact);
                    r.push(Row::new("sieve", "density", &t.density).mode(mode.0, mode.1).cutoff(k).tail(t.tail_bound));
                    r.push(Row::new("sieve", "lower", t.lower()).cutoff(k).tail(t.tail_bound));
                    r.push(Row::new("sieve", "upper", t.upper()).cutoff(k));
                }
                None => {
                    let d = sieved_density_exact(&spec, &limits)?;
                    r.push(Row::new("sieve", "density", d).mode(ValueMode::Exact, ZeroTest::Exact));
                }
            }
        }
        DensityCommand::Multiples(set) => {
            let d = multiples_density(set, &limits)?;
            r.push(Row::new("multiples", "density", d).mode(ValueMode::Exact, ZeroTest::Exact));
        }
        DensityCommand::Euler { spec, primes } => {
            let s = load_spec(spec)?;
            let m = nu_of::<Rational>(&s)?;
            euler_rows(&mut r, "euler", &euler_product_support_density(&m, *primes)?);
        }
        DensityCommand::Cnu { spec, primes } => {
            let s = load_spec(spec)?;
            let m = nu_of::<Rational>(&s)?;
            euler_rows(&mut r, "c_nu", &c_nu_constant(&m, *primes)?);
        }
    }
    Ok(emit(out, &r.csv())?)
}

#[derive(Debug, Clone)]
pub struct MeanValueOptions {
    pub f: PathBuf,
    pub nu: PathBuf,
    pub n: u64,
    pub y: Vec<u64>,
    pub x: Option<u64>,
    pub weighted_tail: Option<TailDeclaration>,
}

fn run_mean_value<V: Lift>(o: &MeanValueOptions, settings: &Settings) -> Result<Produced, CliError> {
    let limit = settings.check_limit(o.n)?;
    let f_spec = load_spec(&o.f)?;
    let nu = nu_of::<V>(&load_spec(&o.nu)?)?;
    let f = tabulate_in::<V>(&f_spec, limit, settings)?;
    let x = o.x.unwrap_or(o.n);
    let tail = o.weighted_tail.unwrap_or(f_spec.weighted_tail);
    let rep = verify_mean_value_convergence(&f, &nu, &o.y, x, tail)?;
    let mut r = Report::default();
    let mut failed = Vec::new();
    let mode = (f.mode(), f.zero_test());
    r.push(Row::new("nu", "sup_abs", rep.sup_nu).mode(ValueMode::Floating, mode.1));
    r.push(Row::new("nu", "delta", rep.delta).mode(ValueMode::Floating, mode.1));
    for l in rep.lambdas.iter().chain(std::iter::once(&rep.lambda)) {
        let (value, m) = match &l.exact {
            Some(e) => (e.to_string(), ValueMode::Exact),
            None => (l.value.to_string(), ValueMode::Floating),
        };
        r.push(Row::new("lambda", format!("y={}", l.y), value).at(x).mode(m, mode.1).cutoff(l.y));
    }
    for d in &rep.drifts {
        let item = format!("{}-{}", d.y1, d.y2);
        let cmp = if d.exact { ValueMode::Exact } else { ValueMode::Floating };
        r.push(Row::new("drift", format!("{item} observed"), d.observed).at(x).mode(ValueMode::Floating, mode.1));
        r.push(Row::new("drift", format!("{item} bound"), d.bound).at(x).tail(tail));
        r.push(Row::new("drift", format!("{item} holds"), d.holds).at(x).mode(cmp, mode.1));
        if !d.holds {
            failed.push(format!("drift bound between y = {} and y = {}", d.y1, d.y2));
        }
    }
    r.push(Row::new("lambda", "limit_radius", rep.limit_radius).at(x).tail(tail));
    r.note(format!("mean value of |g_y|: f = {}, nu = {}, N = {}, x = {x}", f_spec.name, nu.name(), o.n));
    r.note(format!("sup |nu| = {}, delta = {}", rep.sup_nu, rep.delta));
    r.note(format!("lambda = {} (full convolution)", rep.lambda.value));
    r.note(format!(
        "drift bound: {}",
        if rep.drift_holds() { "holds for every adjacent y" } else { "FAILS" }
    ));
    match &rep.witness {
        Some(w) => {
            r.push(Row::new("witness", format!("d={}", w.d), w.value).at(x).mode(ValueMode::Floating, mode.1));
            r.note(format!(
                "positivity witness |f(d)| delta density = {} * {} * {} = {} <= lambda: {}",
                w.f_d_abs,
                w.delta,
                w.density,
                w.value,
                rep.witness_holds()
            ));
            if !rep.witness_holds() {
                failed.push("positivity witness exceeds lambda".into());
            }
        }
        None => r.note("delta = 0: no positivity witness"),
    }
    Ok(Produced { report: r, failed })
}

pub fn mean_value(o: &MeanValueOptions, out: Option<&Path>, settings: &Settings) -> Result<Vec<String>, CliError> {
    let p = if settings.floating {
        run_mean_value::<Complex64>(o, settings)?
    } else {
        run_mean_value::<Rational>(o, settings)?
    };
    emit(out, &p.report.csv())?;
    eprint!("{}", p.report.summary_text());
    Ok(p.failed)
}
