use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use fourier_pairs::cyclic::zero_window;
use fourier_pairs::dump::{MeasureDump, PairingRecord, PositionRecord};
use fourier_pairs::measure::{PeriodicLatticeMeasure, Term, Window, WindowedMeasure};
use fourier_pairs::pair::{build_nu_at, build_pair};
use fourier_pairs::solver::{solve_vanishing_detailed, SPECTRAL_RESIDUAL_BOUND};
use fourier_pairs::symbolic::{SymbolicPosition, DECIMAL_DIGITS};
use fourier_pairs::verify::{min_gap, pairing_batch, q_rank, vanishing_check, GaussianTestFn};
use fourier_pairs::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Cli, Command, Format, Target};

/// Appends a line to a `String` buffer.
macro_rules! say {
    ($buf:expr, $($arg:tt)*) => {{
        let _ = writeln!($buf, $($arg)*);
    }};
}

/// Writes `s` to stdout in one go. A closed pipe (`fpairs ... | head`) is
/// not an error.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(s.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing stdout: {e}");
        }
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Solve { m } => solve(cli, *m),
        Command::Pair { m, window } => pair(cli, *m, window),
        Command::Nu { n_max, window } => nu(cli, *n_max, window),
        Command::Verify {
            target,
            count,
            seed,
            m,
            n_max,
            window,
            fixtures,
        } => verify(
            cli,
            *target,
            *count,
            *seed,
            *m,
            *n_max,
            window.as_ref(),
            fixtures.as_deref(),
        ),
        Command::Export { input, format } => export(cli, input, *format),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn window_strings(w: &Window) -> [PositionRecord; 2] {
    [
        PositionRecord::from_position(w.lo()),
        PositionRecord::from_position(w.hi()),
    ]
}

fn print_atoms(text: &mut String, label: &str, m: &WindowedMeasure) {
    say!(text, "{label}: {} atoms", m.len());
    for a in m.atoms() {
        say!(
            text,
            "  {:>46}  class {:<2} |c| {:.6e}  arg {:+.6}",
            a.position.decimal_string(DECIMAL_DIGITS),
            a.position.class(),
            a.coefficient.norm(),
            a.coefficient.arg()
        );
    }
}

fn plain(m: &Arc<PeriodicLatticeMeasure>, window: &Window, bits: u32) -> Result<WindowedMeasure> {
    Ok(WindowedMeasure::restrict(
        Term::lattice(m.clone(), 1.0, Vec::new()),
        window,
        bits,
    )?)
}

#[derive(Serialize)]
struct SignalDump {
    modulus: usize,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct SolveReport {
    m: u32,
    modulus: usize,
    window_size: usize,
    residual: f64,
    free_residue: usize,
    attempts: usize,
    zeros: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<[f64; 2]>>,
}

fn solve(cli: &Cli, m: u32) -> Result<u8> {
    let mut text = String::new();
    let modulus = 100 * (m as usize).pow(2);
    let sol = solve_vanishing_detailed(modulus)?;
    let window = zero_window(modulus)?;
    let values: Vec<[f64; 2]> = sol.signal.values().iter().map(|z| [z.re, z.im]).collect();
    let mut zeros: Vec<usize> = window
        .members()
        .filter(|&x| sol.signal.values()[x] == Complex64::new(0.0, 0.0))
        .collect();
    zeros.sort_unstable();
    if let Some(path) = &cli.out {
        write(
            path,
            &to_json(&SignalDump {
                modulus,
                values: values.clone(),
            }),
        )?;
    }
    let report = SolveReport {
        m,
        modulus,
        window_size: window.len(),
        residual: sol.residual,
        free_residue: sol.free_residue,
        attempts: sol.attempts,
        zeros,
        values: cli.out.is_none().then_some(values),
    };
    if cli.json {
        text.push_str(&to_json(&report));
    } else {
        say!(
            text,
            "N = {modulus}, window |n| <= {} ({} residues)",
            modulus / 10,
            report.window_size
        );
        say!(
            text,
            "spectral residual {:.3e} (bound {SPECTRAL_RESIDUAL_BOUND:e})",
            report.residual
        );
        say!(
            text,
            "free residue {} after {} attempt(s)",
            report.free_residue,
            report.attempts
        );
        say!(
            text,
            "exact zeros ({}): {:?}",
            report.zeros.len(),
            report.zeros
        );
        if let Some(values) = &report.values {
            for (k, [re, im]) in values.iter().enumerate() {
                say!(text, "{k} {re:e} {im:e}");
            }
        }
    }
    emit(&text);
    Ok(if sol.residual <= SPECTRAL_RESIDUAL_BOUND {
        0
    } else {
        1
    })
}

#[derive(Serialize)]
struct PairReport {
    m: u32,
    modulus: usize,
    window: [PositionRecord; 2],
    mu_atoms: usize,
    mu_hat_atoms: usize,
    mu_vanishes: bool,
    mu_hat_vanishes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<MeasureDump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_hat: Option<MeasureDump>,
}

fn write_pair_dumps(dir: &Path, names: [&str; 2], dumps: [&MeasureDump; 2]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, dump) in names.iter().zip(dumps) {
        write(&dir.join(name), &to_json(dump))?;
    }
    Ok(())
}

fn pair(cli: &Cli, m: u32, window: &Window) -> Result<u8> {
    let mut text = String::new();
    let p = build_pair(m)?;
    let mu = plain(&p.mu, window, cli.precision)?;
    let mu_hat = plain(&p.mu_hat, window, cli.precision)?;
    let radius = p.vanishing_radius();
    let (mu_ok, mu_hat_ok) = (
        vanishing_check(&mu, &radius),
        vanishing_check(&mu_hat, &radius),
    );
    let dumps = [
        MeasureDump::from_measure(&mu),
        MeasureDump::from_measure(&mu_hat),
    ];
    if let Some(dir) = &cli.out {
        write_pair_dumps(dir, ["mu.json", "mu_hat.json"], [&dumps[0], &dumps[1]])?;
    }
    let inline = cli.out.is_none();
    let [d0, d1] = dumps;
    let report = PairReport {
        m,
        modulus: p.modulus,
        window: window_strings(window),
        mu_atoms: mu.len(),
        mu_hat_atoms: mu_hat.len(),
        mu_vanishes: mu_ok,
        mu_hat_vanishes: mu_hat_ok,
        mu: inline.then_some(d0),
        mu_hat: inline.then_some(d1),
    };
    if cli.json {
        text.push_str(&to_json(&report));
    } else {
        say!(text, "M = {m}, N = {}, spacing 1/{}", p.modulus, 10 * m);
        say!(
            text,
            "no atoms in (-{m}, {m}): mu {mu_ok}, mu_hat {mu_hat_ok}"
        );
        if inline {
            print_atoms(&mut text, "mu", &mu);
            print_atoms(&mut text, "mu_hat", &mu_hat);
        } else {
            say!(
                text,
                "mu: {} atoms, mu_hat: {} atoms",
                mu.len(),
                mu_hat.len()
            );
        }
    }
    emit(&text);
    Ok(if mu_ok && mu_hat_ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct ClassRow {
    n: u32,
    m: u32,
    epsilon: String,
    dormant: bool,
    v_mu: Option<f64>,
    v_mu_hat: Option<f64>,
    v_n: Option<f64>,
    n_squared: u32,
    d_n: Option<f64>,
}

#[derive(Serialize)]
struct NuReport {
    n_max: u32,
    window: [PositionRecord; 2],
    classes: Vec<ClassRow>,
    nu_atoms: usize,
    nu_hat_atoms: usize,
    /// `null` with fewer than two atoms.
    min_gap_nu: Option<f64>,
    min_gap_nu_hat: Option<f64>,
    q_rank_nu: usize,
    q_rank_nu_hat: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<MeasureDump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu_hat: Option<MeasureDump>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn rank_of(m: &WindowedMeasure) -> usize {
    let ps: Vec<SymbolicPosition> = m.positions().cloned().collect();
    q_rank(&ps)
}

fn nu(cli: &Cli, n_max: u32, window: &Window) -> Result<u8> {
    let mut text = String::new();
    let t = build_nu_at(n_max, window, cli.precision)?;
    let classes: Vec<ClassRow> = t
        .classes
        .iter()
        .map(|c| ClassRow {
            n: c.n,
            m: c.m,
            epsilon: c.epsilon.decimal_string(DECIMAL_DIGITS),
            dormant: c.is_dormant(),
            v_mu: c.weights.map(|w| w.v_mu),
            v_mu_hat: c.weights.map(|w| w.v_mu_hat),
            v_n: c.weights.map(|w| w.v_n),
            n_squared: c.n * c.n,
            d_n: c.weights.map(|w| w.d_n),
        })
        .collect();
    let dumps = [
        MeasureDump::from_measure(&t.nu),
        MeasureDump::from_measure(&t.nu_hat),
    ];
    if let Some(dir) = &cli.out {
        write_pair_dumps(dir, ["nu.json", "nu_hat.json"], [&dumps[0], &dumps[1]])?;
    }
    let inline = cli.out.is_none();
    let [d0, d1] = dumps;
    let report = NuReport {
        n_max,
        window: window_strings(window),
        classes,
        nu_atoms: t.nu.len(),
        nu_hat_atoms: t.nu_hat.len(),
        min_gap_nu: finite(min_gap(&t.nu)),
        min_gap_nu_hat: finite(min_gap(&t.nu_hat)),
        q_rank_nu: rank_of(&t.nu),
        q_rank_nu_hat: rank_of(&t.nu_hat),
        nu: inline.then_some(d0),
        nu_hat: inline.then_some(d1),
    };
    if cli.json {
        emit(&to_json(&report));
        return Ok(0);
    }
    say!(
        text,
        "n   M_n  V(mu_n)       V(mu_hat_n)   V_n           n^2  D_n"
    );
    for c in &report.classes {
        let cell = |x: Option<f64>| x.map_or("dormant".to_string(), |v| format!("{v:.6}"));
        say!(
            text,
            "{:<3} {:<4} {:<13} {:<13} {:<13} {:<4} {}",
            c.n,
            c.m,
            cell(c.v_mu),
            cell(c.v_mu_hat),
            cell(c.v_n),
            c.n_squared,
            cell(c.d_n)
        );
    }
    let gap = |g: Option<f64>| g.map_or("inf".to_string(), |g| format!("{g:.6e}"));
    say!(
        text,
        "min gap: nu {}, nu_hat {}",
        gap(report.min_gap_nu),
        gap(report.min_gap_nu_hat)
    );
    say!(
        text,
        "q-rank: nu {}, nu_hat {}",
        report.q_rank_nu,
        report.q_rank_nu_hat
    );
    if inline {
        print_atoms(&mut text, "nu", &t.nu);
        print_atoms(&mut text, "nu_hat", &t.nu_hat);
    } else {
        say!(
            text,
            "nu: {} atoms, nu_hat: {} atoms",
            t.nu.len(),
            t.nu_hat.len()
        );
    }
    emit(&text);
    Ok(0)
}

/// `count` Gaussians with `r, a` uniform in `[-2, 2]` and `t` in `[0.5, 2]`,
/// drawn in that order from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn seeded_gaussians(seed: u64, count: usize) -> Vec<GaussianTestFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = rng.gen_range(-2.0..=2.0);
            let a = rng.gen_range(-2.0..=2.0);
            let t = rng.gen_range(0.5..=2.0);
            GaussianTestFn::new(r, a, t).expect("admissible by construction")
        })
        .collect()
}

fn read_fixtures(path: &Path) -> Result<Vec<GaussianTestFn>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw: Vec<GaussianTestFn> = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    raw.into_iter()
        .map(|g| Ok(GaussianTestFn::new(g.center, g.frequency, g.width)?))
        .collect()
}

#[derive(Serialize)]
struct TestRow {
    center: f64,
    frequency: f64,
    width: f64,
    #[serde(flatten)]
    record: Option<PairingRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    target: &'static str,
    window: [PositionRecord; 2],
    count: usize,
    passed: usize,
    failed: usize,
    window_too_small: usize,
    max_residual: f64,
    tests: Vec<TestRow>,
}

#[allow(clippy::too_many_arguments)]
fn verify(
    cli: &Cli,
    target: Target,
    count: usize,
    seed: u64,
    m: u32,
    n_max: u32,
    window: Option<&Window>,
    fixtures: Option<&Path>,
) -> Result<u8> {
    let mut text = String::new();
    let default = if target == Target::Nu {
        (-40, 40)
    } else {
        (-12, 12)
    };
    let window = match window {
        Some(w) => w.clone(),
        None => Window::integers(default.0, default.1)?,
    };
    let tests = match fixtures {
        Some(path) => read_fixtures(path)?,
        None => seeded_gaussians(seed, count),
    };
    let bits = cli.precision;
    let (name, space, freq) = match target {
        Target::Psf => {
            let comb = plain(
                &Arc::new(PeriodicLatticeMeasure::unit_comb()),
                &window,
                bits,
            )?;
            ("psf", comb.clone(), comb)
        }
        Target::Pair => {
            let p = build_pair(m)?;
            (
                "pair",
                plain(&p.mu, &window, bits)?,
                plain(&p.mu_hat, &window, bits)?,
            )
        }
        Target::Nu => {
            let t = build_nu_at(n_max, &window, bits)?;
            ("nu", t.nu, t.nu_hat)
        }
    };
    let results = pairing_batch(&space, &freq, &tests);
    let mut report = VerifyReport {
        target: name,
        window: window_strings(&window),
        count: tests.len(),
        passed: 0,
        failed: 0,
        window_too_small: 0,
        max_residual: 0.0,
        tests: Vec::with_capacity(tests.len()),
    };
    for (g, r) in tests.iter().zip(results) {
        let (record, error) = match r {
            Ok(r) => {
                if r.pass {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                }
                report.max_residual = report.max_residual.max(r.residual);
                (Some(PairingRecord::from(&r)), None)
            }
            Err(e @ Error::WindowTooSmall { .. }) => {
                report.window_too_small += 1;
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        report.tests.push(TestRow {
            center: g.center,
            frequency: g.frequency,
            width: g.width,
            record,
            error,
        });
    }
    if let Some(path) = &cli.out {
        write(path, &to_json(&report))?;
    }
    if cli.json {
        text.push_str(&to_json(&report));
    } else {
        for (i, row) in report.tests.iter().enumerate() {
            let head = format!(
                "{i:>3} r={:+.6} a={:+.6} t={:.6}",
                row.center, row.frequency, row.width
            );
            match (&row.record, &row.error) {
                (Some(r), _) => say!(
                    text,
                    "{head}  residual {:.3e}  tail {:.3e}  {}",
                    r.residual,
                    r.tail_bound,
                    if r.pass { "pass" } else { "FAIL" }
                ),
                (None, Some(e)) => say!(text, "{head}  {e}"),
                (None, None) => unreachable!(),
            }
        }
        say!(
            text,
            "{name}: {}/{} pass, {} fail, {} window too small, max residual {:.3e}",
            report.passed,
            report.count,
            report.failed,
            report.window_too_small,
            report.max_residual
        );
    }
    emit(&text);
    Ok(if report.window_too_small > 0 {
        4
    } else if report.failed > 0 {
        1
    } else {
        0
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    position_float: &'a str,
    class: u32,
    abs_coeff: f64,
    arg_coeff: f64,
}

fn export(cli: &Cli, input: &Path, format: Format) -> Result<u8> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let dump: MeasureDump = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", input.display())))?;
    dump.validate()?;
    let out = match format {
        Format::Json => to_json(&dump),
        Format::Csv => {
            // Header written by hand so an empty dump still gets one.
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(["position_float", "class", "abs_coeff", "arg_coeff"])?;
            for a in &dump.atoms {
                let c = a.coefficient();
                w.serialize(CsvRow {
                    position_float: &a.position_float,
                    class: a.class,
                    abs_coeff: c.norm(),
                    arg_coeff: c.arg(),
                })?;
            }
            String::from_utf8(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?
        }
    };
    match &cli.out {
        Some(path) => write(path, &out)?,
        None => emit(&out),
    }
    Ok(0)
}
