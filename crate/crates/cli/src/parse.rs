//! Parsing of grids, profiles, energies and regions from command-line flags.

use barrierclock::{PotentialProfile, Region, UnitSystem};

use crate::{CliError, EnergyArgs, ProfileArgs, RegionArg};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    let x: f64 = s.trim().parse().map_err(|_| bad(format!("{what}: '{s}' is not a number")))?;
    if !x.is_finite() {
        return Err(bad(format!("{what}: '{s}' is not finite")));
    }
    Ok(x)
}

/// `start:stop:count` with `count >= 1`; `log` spaces the points
/// geometrically.
pub fn grid(spec: &str, log: bool) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(bad(format!("grid '{spec}' must be start:stop:count")));
    };
    let (a, b) = (number(start, "grid start")?, number(stop, "grid stop")?);
    let n: usize = count.trim().parse().map_err(|_| bad(format!("grid count '{count}' is not an integer")))?;
    if n == 0 {
        return Err(bad("grid count must be at least 1"));
    }
    if log && !(a > 0.0 && b > 0.0) {
        return Err(bad("logarithmic grids need positive endpoints"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let f = i as f64 / last;
            if i == n - 1 {
                b
            } else if log {
                a * (b / a).powf(f)
            } else {
                a + (b - a) * f
            }
        })
        .collect())
}

/// `V0,d`.
pub fn barrier(spec: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    let [v0, d] = parts[..] else {
        return Err(bad(format!("barrier '{spec}' must be V0,d")));
    };
    let d = number(d, "barrier width")?;
    if !(d > 0.0) {
        return Err(bad(format!("barrier width must be positive, got {d}")));
    }
    Ok((number(v0, "barrier height")?, d))
}

pub fn units(args: &ProfileArgs) -> Result<UnitSystem, CliError> {
    Ok(UnitSystem::new(args.hbar, args.mass)?)
}

pub fn profile(args: &ProfileArgs) -> Result<PotentialProfile, CliError> {
    match (&args.barrier, &args.profile) {
        (Some(b), _) => {
            let (v0, d) = barrier(b)?;
            Ok(PotentialProfile::rectangular(v0, d)?)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
            Ok(PotentialProfile::from_json(&text)?)
        }
        (None, None) => Err(bad("give either --barrier V0,d or --profile FILE")),
    }
}

pub fn energy(args: &EnergyArgs, profile: &PotentialProfile) -> Result<f64, CliError> {
    let e = match (args.energy, args.energy_frac) {
        (Some(e), _) => e,
        (None, Some(f)) => {
            let top = profile.max_potential();
            if !(top > 0.0) {
                return Err(bad("--energy-frac needs a profile with a positive potential"));
            }
            f * top
        }
        (None, None) => return Err(bad("give --energy or --energy-frac")),
    };
    if !(e > 0.0 && e.is_finite()) {
        return Err(bad(format!("energy must be positive, got {e}")));
    }
    Ok(e)
}

/// The explicit region, else the support (an empty region for a free
/// profile).
pub fn region(arg: &RegionArg, profile: &PotentialProfile) -> Result<Region, CliError> {
    match &arg.region {
        Some(s) => {
            let parts: Vec<&str> = s.split(':').collect();
            let [x1, x2] = parts[..] else {
                return Err(bad(format!("region '{s}' must be x1:x2")));
            };
            Ok(Region::new(number(x1, "region start")?, number(x2, "region end")?)?)
        }
        None => Ok(profile.support_region().unwrap_or(Region { x1: 0.0, x2: 0.0 })),
    }
}
