//! One function per subcommand: arguments in, [`Report`] out.

use serde_json::{json, Map, Value};

use landau_rel::closed_form::{self, ModelParams, QuantumNumbers};
use landau_rel::rational::{format_rational, parse_rational, rational_from_f64};
use landau_rel::spectrum::{self, Crossing};
use landau_rel::units::{self, PhysicalConfig};
use landau_rel::verify::{self, DimPolicy, VerifyConfig};
use landau_rel::{Order, Rational, Scalar};

use crate::output::{format_float, Cell, Report, Table};
use crate::{
    CliError, CrossingsArgs, DegeneracyArgs, EnergyArgs, PhysicalArgs, SpectrumArgs, SplitArgs, Units, VerifyArgs,
};

/// A report plus, for `verify`, the reason the run counts as failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub failure: Option<String>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, failure: None }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_arg(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| usage(format!("--{name}: {s:?} is not a rational number")))
}

fn positive(name: &str, r: Rational) -> Result<Rational, CliError> {
    if r > Rational::from_int(0) {
        Ok(r)
    } else {
        Err(usage(format!("--{name} must be positive, got {}", format_rational(&r))))
    }
}

/// Model inputs after resolving `--eps`/`--w` against the SI flags.
#[derive(Debug, Clone)]
struct Resolved {
    w: Option<Rational>,
    eps: Rational,
    /// Both inputs were given as rationals rather than derived from SI values.
    exact: bool,
    physical: Option<PhysicalConfig>,
}

fn physical_config(p: &PhysicalArgs) -> Result<Option<PhysicalConfig>, CliError> {
    let Some(b) = p.b_tesla else { return Ok(None) };
    let cfg = if p.omega_z_from_b {
        PhysicalConfig::with_axial_from_field(b, None)?
    } else if p.k_grad.is_some() || p.omega_z.is_some() {
        PhysicalConfig::new(b, p.k_grad, p.omega_z, None)?
    } else {
        return Err(usage("--B-tesla needs one of --omega-z, --k-grad or --omega-z-from-B"));
    };
    Ok(Some(cfg))
}

fn resolve(w: Option<&str>, eps: Option<&str>, p: &PhysicalArgs) -> Result<Resolved, CliError> {
    let w = w
        .map(|s| parse_arg("w", s).and_then(|r| positive("w", r)))
        .transpose()?;
    match (eps, physical_config(p)?) {
        (Some(_), Some(_)) => Err(usage("give either --eps or --B-tesla, not both")),
        (None, None) => Err(usage("one of --eps or --B-tesla is required")),
        (Some(e), None) => {
            let eps = parse_arg("eps", e)?;
            if eps < Rational::from_int(0) {
                return Err(usage("--eps must be non-negative"));
            }
            Ok(Resolved {
                exact: w.is_some(),
                w,
                eps,
                physical: None,
            })
        }
        (None, Some(cfg)) => {
            let eps = rational_from_f64(units::epsilon(&cfg)?)?;
            let w = match w {
                Some(w) => w,
                None => rational_from_f64(units::frequency_ratio(&cfg)?)?,
            };
            Ok(Resolved {
                w: Some(w),
                eps,
                exact: false,
                physical: Some(cfg),
            })
        }
    }
}

fn physical_parameters(params: &mut Map<String, Value>, cfg: &PhysicalConfig) -> Result<(), CliError> {
    params.insert("b_tesla".into(), json!(cfg.b_tesla));
    params.insert("omega_c".into(), json!(units::cyclotron_frequency(cfg)?));
    params.insert("omega_z".into(), json!(units::axial_frequency(cfg)?));
    params.insert("hbar_omega_z_mev".into(), json!(units::to_si_energy(1.0, cfg)?));
    Ok(())
}

fn check_range(w_lo: f64, w_hi: f64) -> Result<(), CliError> {
    if !(w_lo.is_finite() && w_hi.is_finite() && w_lo > 0.0 && w_hi > w_lo) {
        return Err(usage(format!("need 0 < w-lo < w-hi, got [{w_lo}, {w_hi}]")));
    }
    Ok(())
}

fn order_value(o: Order) -> Value {
    json!(o.as_u8())
}

pub fn energy(a: &EnergyArgs) -> Result<Outcome, CliError> {
    let r = resolve(a.w.as_deref(), a.eps.as_deref(), &a.physical)?;
    let w =
        r.w.clone()
            .ok_or_else(|| usage("--w is required unless --B-tesla is given"))?;
    if a.units == Units::Mev && r.physical.is_none() {
        return Err(usage("--units mev needs the SI flags"));
    }
    let q = QuantumNumbers::new(a.n, a.nz);
    let params = ModelParams::new(w.clone(), r.eps.clone())?.with_rest_mass(a.rest_mass);
    let exact = closed_form::decompose(&q, &params, a.order)?;
    let approx = exact.to_f64();
    let scale = match (&r.physical, a.units) {
        (Some(cfg), Units::Mev) => units::to_si_energy(1.0, cfg)?,
        _ => 1.0,
    };
    let exact_cell = |v: &Rational| -> Cell {
        if r.exact {
            format_rational(v).into()
        } else {
            Cell::Empty
        }
    };

    let mut t = Table::new(
        "records",
        &[
            "n",
            "nz",
            "spin_mult",
            "order",
            "units",
            "e0",
            "e1",
            "e2",
            "total",
            "e0_exact",
            "e1_exact",
            "e2_exact",
            "total_exact",
        ],
    );
    t.push(vec![
        q.n.into(),
        q.nz.into(),
        q.spin_mult().into(),
        Cell::Int(a.order.as_u8() as i64),
        if scale == 1.0 && a.units == Units::Natural {
            "hbar_omega_z"
        } else {
            "meV"
        }
        .into(),
        (approx.e0 * scale).into(),
        (approx.e1 * scale).into(),
        (approx.e2 * scale).into(),
        (approx.total * scale).into(),
        exact_cell(&exact.e0),
        exact_cell(&exact.e1),
        exact_cell(&exact.e2),
        exact_cell(&exact.total),
    ]);

    let mut p = Map::new();
    p.insert("n".into(), json!(a.n));
    p.insert("nz".into(), json!(a.nz));
    p.insert("w".into(), json!(format_rational(&w)));
    p.insert("eps".into(), json!(format_rational(&r.eps)));
    p.insert("w_f64".into(), json!(w.to_f64()));
    p.insert("eps_f64".into(), json!(r.eps.to_f64()));
    p.insert("order".into(), order_value(a.order));
    p.insert("rest_mass".into(), json!(a.rest_mass));
    if let Some(cfg) = &r.physical {
        physical_parameters(&mut p, cfg)?;
    }
    Ok(Report {
        command: "energy",
        parameters: p,
        tables: vec![t],
    }
    .into())
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let w_list =
        a.w.iter()
            .map(|s| parse_arg("w", s.trim()).and_then(|r| positive("w", r)))
            .collect::<Result<Vec<_>, _>>()?;
    let cfg = VerifyConfig {
        n_max: a.n_max,
        nz_max: a.nz_max,
        w_list,
        dim: match a.dim_extra {
            Some(extra) => DimPolicy::PerLevel { extra },
            None => DimPolicy::Fixed(a.dim),
        },
        guard_band: a.guard_band,
        energy_tol: a.tol,
        case_tol: a.case_tol,
        selection_tol: a.selection_tol,
        moment_tol: a.moment_tol,
    };
    cfg.validate()?;
    let report = verify::verify(&cfg)?;

    let mut summary = Table::new(
        "records",
        &["class", "checks", "max_deviation", "tolerance", "failures", "status"],
    );
    for s in &report.summaries {
        summary.push(vec![
            s.class.name().into(),
            s.checks.into(),
            s.max_deviation.into(),
            s.tolerance.into(),
            s.failures.into(),
            if s.failures == 0 { "pass" } else { "fail" }.into(),
        ]);
    }
    let mut failures = Table::new("failures", &["class", "n", "nz", "w", "deviation", "detail"]);
    for f in &report.failures {
        failures.push(vec![
            f.class.name().into(),
            f.n.into(),
            f.nz.into(),
            f.w.clone().into(),
            f.deviation.into(),
            f.detail.clone().into(),
        ]);
    }

    let mut p = Map::new();
    p.insert("eps".into(), json!("1"));
    p.insert("config".into(), serde_json::to_value(&cfg)?);

    let failure = (!report.passed()).then(|| {
        let mut msg = format!("verification failed at {} point(s):\n", report.failures.len());
        for f in &report.failures {
            msg.push_str(&format!(
                "  {} at (n, nz, w) = ({}, {}, {}): deviation {}\n",
                f.class.name(),
                f.n,
                f.nz,
                f.w,
                format_float(f.deviation)
            ));
        }
        msg
    });
    Ok(Outcome {
        report: Report {
            command: "verify",
            parameters: p,
            tables: vec![summary, failures],
        },
        failure,
    })
}

fn line_parameters(
    p: &mut Map<String, Value>,
    r: &Resolved,
    n_max: u32,
    nz_max: u32,
    order: Order,
    w_lo: f64,
    w_hi: f64,
) -> Result<(), CliError> {
    p.insert("w_lo".into(), json!(w_lo));
    p.insert("w_hi".into(), json!(w_hi));
    p.insert("n_max".into(), json!(n_max));
    p.insert("nz_max".into(), json!(nz_max));
    p.insert("order".into(), order_value(order));
    p.insert("eps".into(), json!(format_rational(&r.eps)));
    p.insert("eps_f64".into(), json!(r.eps.to_f64()));
    if let Some(cfg) = &r.physical {
        physical_parameters(p, cfg)?;
    }
    Ok(())
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    check_range(a.w_lo, a.w_hi)?;
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let r = resolve(None, a.eps.as_deref(), &a.physical)?;
    let lines = spectrum::spectral_lines(a.n_max, a.nz_max, &r.eps, a.order);
    let samples = spectrum::sample_lines(&lines, a.w_lo, a.w_hi, a.samples)?;

    let mut t = Table::new("records", &["n", "nz", "spin_mult", "w", "energy"]);
    for s in samples {
        t.push(vec![
            s.q.n.into(),
            s.q.nz.into(),
            s.q.spin_mult().into(),
            s.w.into(),
            s.energy.into(),
        ]);
    }
    let mut p = Map::new();
    line_parameters(&mut p, &r, a.n_max, a.nz_max, a.order, a.w_lo, a.w_hi)?;
    p.insert("samples".into(), json!(a.samples));
    Ok(Report {
        command: "spectrum",
        parameters: p,
        tables: vec![t],
    }
    .into())
}

fn crossing_row(c: &Crossing, cluster: usize) -> Vec<Cell> {
    vec![
        c.line_a.n.into(),
        c.line_a.nz.into(),
        c.line_b.n.into(),
        c.line_b.nz.into(),
        c.w_star.into(),
        c.e_star.into(),
        c.unperturbed_w.as_ref().map(format_rational).into(),
        c.shift.into(),
        c.spin_degeneracy().into(),
        cluster.into(),
    ]
}

pub fn crossings(a: &CrossingsArgs) -> Result<Outcome, CliError> {
    check_range(a.w_lo, a.w_hi)?;
    if !(a.cluster_tol.is_finite() && a.cluster_tol >= 0.0) {
        return Err(usage("--cluster-tol must be a non-negative number"));
    }
    let r = resolve(None, a.eps.as_deref(), &a.physical)?;
    let lines = spectrum::spectral_lines(a.n_max, a.nz_max, &r.eps, a.order);
    let found = spectrum::find_crossings(&lines, a.w_lo, a.w_hi)?;
    let eps = r.eps.to_f64();
    let tol = if eps > 0.0 { a.cluster_tol * eps } else { a.cluster_tol };
    let clusters = spectrum::crossing_clusters(&found.crossings, tol);

    let mut ct = Table::new(
        "records",
        &[
            "a_n",
            "a_nz",
            "b_n",
            "b_nz",
            "w_star",
            "e_star",
            "unperturbed_w",
            "shift",
            "spin_degeneracy",
            "cluster",
        ],
    );
    let mut kt = Table::new(
        "clusters",
        &["cluster", "w_center", "e_center", "crossings", "lines", "members"],
    );
    let mut rows = Vec::new();
    for (i, k) in clusters.iter().enumerate() {
        rows.extend(k.members.iter().map(|c| (c, i)));
        let members: Vec<String> = k.lines.iter().map(ToString::to_string).collect();
        kt.push(vec![
            i.into(),
            k.w_center.into(),
            k.e_center.into(),
            k.members.len().into(),
            k.lines.len().into(),
            members.join(" ").into(),
        ]);
    }
    rows.sort_by(|x, y| {
        (x.0.line_a, x.0.line_b)
            .cmp(&(y.0.line_a, y.0.line_b))
            .then(x.0.w_star.total_cmp(&y.0.w_star))
    });
    for (c, i) in rows {
        ct.push(crossing_row(c, i));
    }

    let mut p = Map::new();
    line_parameters(&mut p, &r, a.n_max, a.nz_max, a.order, a.w_lo, a.w_hi)?;
    p.insert("cluster_tol".into(), json!(a.cluster_tol));
    p.insert("cluster_tol_abs".into(), json!(tol));
    p.insert("coincident_pairs".into(), json!(found.coincident_pairs.len()));
    Ok(Report {
        command: "crossings",
        parameters: p,
        tables: vec![ct, kt],
    }
    .into())
}

pub fn split(a: &SplitArgs) -> Result<Outcome, CliError> {
    let eps = parse_arg("eps", &a.eps)?;
    if eps < Rational::from_int(0) {
        return Err(usage("--eps must be non-negative"));
    }
    let entries = spectrum::split_diagram(a.shell, &eps)?;
    let mut t = Table::new("records", &["n", "nz", "spin_mult", "e0", "e1_per_eps", "e1", "total"]);
    for e in &entries {
        t.push(vec![
            e.q.n.into(),
            e.q.nz.into(),
            e.q.spin_mult().into(),
            format_rational(&e.e0).into(),
            format_rational(&e.e1_per_eps).into(),
            format_rational(&e.e1).into(),
            format_rational(&e.total).into(),
        ]);
    }
    let mut p = Map::new();
    p.insert("shell".into(), json!(a.shell));
    p.insert("w".into(), json!("1"));
    p.insert("eps".into(), json!(format_rational(&eps)));
    Ok(Report {
        command: "split",
        parameters: p,
        tables: vec![t],
    }
    .into())
}

pub fn degeneracy(a: &DegeneracyArgs) -> Result<Outcome, CliError> {
    let w = positive("w", parse_arg("w", &a.w)?)?;
    let e_max = a.e_max.as_deref().map(|s| parse_arg("e-max", s)).transpose()?;
    let groups = spectrum::degeneracy_groups(&w, e_max.as_ref(), a.n_max, a.nz_max)?;
    let mut t = Table::new("records", &["energy", "size", "total_multiplicity", "members"]);
    for g in &groups {
        let members: Vec<String> = g.members.iter().map(ToString::to_string).collect();
        t.push(vec![
            format_rational(&g.energy).into(),
            g.members.len().into(),
            g.total_multiplicity.into(),
            members.join(" ").into(),
        ]);
    }
    let mut p = Map::new();
    p.insert("w".into(), json!(format_rational(&w)));
    p.insert("e_max".into(), json!(e_max.as_ref().map(format_rational)));
    p.insert("n_max".into(), json!(a.n_max));
    p.insert("nz_max".into(), json!(a.nz_max));
    Ok(Report {
        command: "degeneracy",
        parameters: p,
        tables: vec![t],
    }
    .into())
}
