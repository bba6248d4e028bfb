use std::io::Write;
use std::path::Path;

use barrierclock::clock::{
    coherent_spin_state, larmor_spin_s, pointer_measurement, squeezed_spin_state, SpinState,
};
use barrierclock::format::serialize_f64;
use barrierclock::verify::{case_reports, generate_cases, VerifyOptions};
use barrierclock::weaktimes::{self, channel_times, group_delay, opaque_asymptotics, OpaqueLimits};
use barrierclock::{solve_stationary, Channel, ComplexTime, PotentialProfile, Region, TimeChannel, UnitSystem};
use rayon::prelude::*;
use serde::Serialize;

use crate::table::{Cell, Table};
use crate::{parse, ClockArgs, CliError, DensityArgs, Format, OutputArgs, PointerArgs, SweepArgs, SweepParam, TimesArgs, VerifyArgs};

/// Unitarity residual accepted as a pass in `times`.
const UNITARITY_CHECK: f64 = 1e-12;
/// Relative weighted-identity residual accepted as a pass in `times`.
const IDENTITY_CHECK: f64 = 1e-10;

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

fn emit(table: &Table, out: &OutputArgs) -> Result<(), CliError> {
    let text = match out.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    write_out(out.output.as_deref(), &text)?;
    if let Some(p) = &out.plot_data {
        write_out(Some(p), &table.to_plot_data())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TimesReport {
    #[serde(serialize_with = "serialize_f64")]
    energy: f64,
    #[serde(serialize_with = "serialize_f64")]
    k: f64,
    region: Region,
    t: ComplexTime,
    r: ComplexTime,
    #[serde(serialize_with = "serialize_f64")]
    transmission: f64,
    #[serde(serialize_with = "serialize_f64")]
    reflection: f64,
    #[serde(serialize_with = "serialize_f64")]
    unitarity_residual: f64,
    unitarity_check: bool,
    #[serde(rename = "tau_T")]
    tau_t: Option<ComplexTime>,
    #[serde(rename = "tau_T_reason")]
    tau_t_reason: Option<&'static str>,
    #[serde(rename = "tau_R")]
    tau_r: Option<ComplexTime>,
    #[serde(rename = "tau_R_reason")]
    tau_r_reason: Option<&'static str>,
    #[serde(serialize_with = "serialize_f64")]
    tau_d: f64,
    #[serde(rename = "w_T", serialize_with = "serialize_f64")]
    w_t: f64,
    #[serde(rename = "w_R", serialize_with = "serialize_f64")]
    w_r: f64,
    #[serde(serialize_with = "serialize_f64")]
    identity_residual: f64,
    identity_check: bool,
    #[serde(serialize_with = "serialize_f64")]
    tau_g: f64,
    tau_g_reference: &'static str,
    opaque_limits: Option<OpaqueReport>,
}

#[derive(Serialize)]
struct OpaqueReport {
    #[serde(serialize_with = "serialize_f64")]
    re_limit: f64,
    #[serde(serialize_with = "serialize_f64")]
    im_limit: f64,
    #[serde(serialize_with = "serialize_f64")]
    modulus: f64,
}

impl From<OpaqueLimits> for OpaqueReport {
    fn from(l: OpaqueLimits) -> Self {
        OpaqueReport { re_limit: l.re_limit, im_limit: l.im_limit, modulus: l.modulus() }
    }
}

pub fn times(args: TimesArgs) -> Result<(), CliError> {
    let units = parse::units(&args.profile)?;
    let profile = parse::profile(&args.profile)?;
    let energy = parse::energy(&args.energy, &profile)?;
    let region = parse::region(&args.region, &profile)?;
    let sol = solve_stationary(&profile, energy, units)?;
    let times = channel_times(&sol, &region);
    let residual = times.identity_residual().norm();
    let identity_residual = if times.tau_d > 0.0 { residual / times.tau_d } else { residual };
    let gd = group_delay(&profile, energy, units)?;
    let opaque_limits = match &args.profile.barrier {
        Some(b) => {
            let (v0, d) = parse::barrier(b)?;
            opaque_asymptotics(v0, d, energy, units).ok().map(OpaqueReport::from)
        }
        None => None,
    };
    let unitarity_residual = (sol.transmission() + sol.reflection() - 1.0).abs();
    let report = TimesReport {
        energy,
        k: sol.wavenumber(),
        region,
        t: ComplexTime(sol.t()),
        r: ComplexTime(sol.r()),
        transmission: sol.transmission(),
        reflection: sol.reflection(),
        unitarity_residual,
        unitarity_check: unitarity_residual < UNITARITY_CHECK,
        tau_t: times.tau_t,
        tau_t_reason: times.tau_t_undefined.map(|r| r.code()),
        tau_r: times.tau_r,
        tau_r_reason: times.tau_r_undefined.map(|r| r.code()),
        tau_d: times.tau_d,
        w_t: times.w_t,
        w_r: times.w_r,
        identity_residual,
        identity_check: identity_residual < IDENTITY_CHECK,
        tau_g: gd.value,
        tau_g_reference: gd.reference.formula(),
        opaque_limits,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Input(e.to_string()))?;
    text.push('\n');
    write_out(args.output.as_deref(), &text)
}

fn reason_cell(reasons: &[String]) -> Cell {
    Cell::Text(reasons.join(";"))
}

fn sweep_row(param: f64, profile: &PotentialProfile, energy: f64, region: &Region, units: UnitSystem) -> Result<Vec<Cell>, CliError> {
    let sol = solve_stationary(profile, energy, units)?;
    let times = channel_times(&sol, region);
    let gd = group_delay(profile, energy, units)?;
    let mut reasons = Vec::new();
    if let Some(r) = times.tau_t_undefined {
        reasons.push(format!("tau_T:{}", r.code()));
    }
    if let Some(r) = times.tau_r_undefined {
        reasons.push(format!("tau_R:{}", r.code()));
    }
    Ok(vec![
        param.into(),
        energy.into(),
        sol.transmission().into(),
        sol.t().re.into(),
        sol.t().im.into(),
        times.tau_t.map(|t| t.re()).into(),
        times.tau_t.map(|t| t.im()).into(),
        times.tau_r.map(|t| t.re()).into(),
        times.tau_r.map(|t| t.im()).into(),
        times.tau_d.into(),
        gd.value.into(),
        times.w_t.into(),
        times.w_r.into(),
        reason_cell(&reasons),
    ])
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let units = parse::units(&args.profile)?;
    let values = parse::grid(&args.range, args.log)?;
    let name = match args.param {
        SweepParam::Energy => "E",
        SweepParam::EnergyFrac => "energy_frac",
        SweepParam::D => "d",
        SweepParam::V0 => "V0",
    };
    let header = [
        name, "energy", "transmission", "t_re", "t_im", "tau_T_re", "tau_T_im", "tau_R_re", "tau_R_im", "tau_d", "tau_g",
        "w_T", "w_R", "reason",
    ];
    let rows: Vec<Vec<Cell>> = match args.param {
        SweepParam::Energy | SweepParam::EnergyFrac => {
            let profile = parse::profile(&args.profile)?;
            let region = parse::region(&args.region, &profile)?;
            let top = profile.max_potential();
            if args.param == SweepParam::EnergyFrac && !(top > 0.0) {
                return Err(CliError::Input("energy-frac sweeps need a positive potential".into()));
            }
            values
                .par_iter()
                .map(|&x| {
                    let e = if args.param == SweepParam::Energy { x } else { x * top };
                    sweep_row(x, &profile, e, &region, units)
                })
                .collect::<Result<_, _>>()?
        }
        SweepParam::D | SweepParam::V0 => {
            let spec = args
                .profile
                .barrier
                .as_deref()
                .ok_or_else(|| CliError::Input("width and height sweeps need --barrier V0,d".into()))?;
            let (v0, d) = parse::barrier(spec)?;
            values
                .par_iter()
                .map(|&x| {
                    let (v, w) = if args.param == SweepParam::D { (v0, x) } else { (x, d) };
                    let profile = PotentialProfile::rectangular(v, w)?;
                    let energy = parse::energy(&args.energy, &profile)?;
                    let region = parse::region(&args.region, &profile)?;
                    sweep_row(x, &profile, energy, &region, units)
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut table = Table::new(&header);
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, &args.out)
}

pub fn density(args: DensityArgs) -> Result<(), CliError> {
    let units = parse::units(&args.profile)?;
    let profile = parse::profile(&args.profile)?;
    let energy = parse::energy(&args.energy, &profile)?;
    let channel: TimeChannel = args.channel.parse()?;
    let xs = parse::grid(&args.xrange, false)?;
    let sol = solve_stationary(&profile, energy, units)?;
    let mut table = Table::new(&["x", "re", "im", "reason"]);
    for x in xs {
        match weaktimes::density(&sol, channel, x) {
            Ok(v) => table.push(vec![x.into(), v.re.into(), v.im.into(), Cell::Text(String::new())]),
            Err(barrierclock::Error::UndefinedChannelTime { channel, reason }) => {
                table.push(vec![x.into(), Cell::Missing, Cell::Missing, Cell::Text(format!("{channel}:{}", reason.code()))])
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(&table, &args.out)
}

fn post_channel(s: &str) -> Result<Channel, CliError> {
    match s.parse::<Channel>()? {
        Channel::Incident => Err(CliError::Input("post-selection channel must be T or R".into())),
        c => Ok(c),
    }
}

pub fn clock(args: ClockArgs) -> Result<(), CliError> {
    let units = parse::units(&args.profile)?;
    let profile = parse::profile(&args.profile)?;
    let energy = parse::energy(&args.energy, &profile)?;
    let region = parse::region(&args.region, &profile)?;
    let channel = post_channel(&args.channel)?;
    let base_state = |width: Option<f64>| -> Result<SpinState, CliError> {
        Ok(match width {
            Some(w) => squeezed_spin_state(args.spin, w)?,
            None => coherent_spin_state(args.spin)?,
        })
    };
    // (first column value, omega, state)
    let (name, points): (&str, Vec<(f64, f64, SpinState)>) = if let Some(spec) = &args.squeeze_sweep {
        let widths = parse::grid(spec, args.log)?;
        let pts = widths.into_iter().map(|w| Ok((w, args.omega, base_state(Some(w))?))).collect::<Result<_, CliError>>()?;
        ("width", pts)
    } else if let Some(spec) = &args.omega_sweep {
        let state = base_state(args.squeeze)?;
        let pts = parse::grid(spec, args.log)?.into_iter().map(|w| (w, w, state.clone())).collect();
        ("omega_L", pts)
    } else {
        ("omega_L", vec![(args.omega, args.omega, base_state(args.squeeze)?)])
    };
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|(x, omega, state)| {
            let res = larmor_spin_s(&profile, &region, energy, *omega, state, channel, units)?;
            Ok(vec![
                (*x).into(),
                res.tau_y.into(),
                res.tau_z.into(),
                res.in_plane_angle.into(),
                res.out_of_plane.into(),
                res.norm.into(),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    let mut table = Table::new(&[name, "tau_y_re", "tau_z", "in_plane_angle", "out_of_plane", "norm"]);
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, &args.out)
}

pub fn pointer(args: PointerArgs) -> Result<(), CliError> {
    let units = parse::units(&args.profile)?;
    let profile = parse::profile(&args.profile)?;
    let energy = parse::energy(&args.energy, &profile)?;
    let region = parse::region(&args.region, &profile)?;
    let channel = post_channel(&args.channel)?;
    let (name, points): (&str, Vec<(f64, f64, f64)>) = if let Some(spec) = &args.g0_sweep {
        ("g0", parse::grid(spec, args.log)?.into_iter().map(|g| (g, g, args.sigma)).collect())
    } else if let Some(spec) = &args.sigma_sweep {
        ("sigma", parse::grid(spec, args.log)?.into_iter().map(|s| (s, args.g0, s)).collect())
    } else {
        ("g0", vec![(args.g0, args.g0, args.sigma)])
    };
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|&(x, g0, sigma)| {
            let out = pointer_measurement(&profile, &region, energy, g0, sigma, channel, units)?;
            let (dq_g, dp_g) = if g0 > 0.0 {
                (Some(out.dq / g0), Some(out.dp * 2.0 * sigma * sigma / g0))
            } else {
                (None, None)
            };
            Ok(vec![x.into(), out.dq.into(), out.dp.into(), dq_g.into(), dp_g.into(), out.norm.into()])
        })
        .collect::<Result<_, CliError>>()?;
    let mut table = Table::new(&[name, "dQ", "dP", "dQ_over_g0", "dP_2sigma2_over_g0", "norm"]);
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, &args.out)
}

pub fn verify(args: VerifyArgs) -> Result<(), CliError> {
    if let Some(t) = args.tolerance {
        if !(t >= 0.0) {
            return Err(CliError::Input(format!("tolerance must be non-negative, got {t}")));
        }
    }
    if !(args.tolerance_scale >= 0.0) {
        return Err(CliError::Input("tolerance scale must be non-negative".into()));
    }
    let opts = VerifyOptions {
        seed: args.seed,
        cases: args.cases,
        tolerance_override: args.tolerance,
        tolerance_scale: args.tolerance_scale,
    };
    let cases = generate_cases(opts.seed, opts.cases);
    let reports: Vec<_> = cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| case_reports(c, i, &opts))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_json_line());
        text.push('\n');
    }
    write_out(args.output.as_deref(), &text)?;
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    if failed.is_empty() {
        eprintln!("verify: {} reports, all passed", reports.len());
        Ok(())
    } else {
        let mut msg = format!("verify: {} of {} reports failed", failed.len(), reports.len());
        for r in failed.iter().take(20) {
            msg.push_str(&format!("\n  {r}"));
        }
        if failed.len() > 20 {
            msg.push_str(&format!("\n  ... and {} more", failed.len() - 20));
        }
        Err(CliError::Verification(msg))
    }
}
