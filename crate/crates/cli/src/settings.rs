//! Options shared by every subcommand and the key=value config file.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Args, Command};
use packbound_core::{Config, Tolerances};

use crate::failure::{read_file, Failure};

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// File of key=value lines (keys are long flag names without dashes);
    /// flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Worker threads [default: available parallelism].
    #[arg(long, global = true, env = "PACKBOUND_WORKERS")]
    pub workers: Option<usize>,

    /// Absolute slack for comparisons between bound values.
    #[arg(long, global = true, default_value_t = Tolerances::default().bound)]
    pub bound_tol: f64,

    /// Distances below 2 − geom-tol are conflicts.
    #[arg(long, global = true, default_value_t = Tolerances::default().geom)]
    pub geom_tol: f64,

    /// Eigenvalue floor accepted as positive semidefinite.
    #[arg(long, global = true, default_value_t = Tolerances::default().psd)]
    pub psd_tol: f64,

    /// Relative duality gap at which the SDP solver stops.
    #[arg(long, global = true, default_value_t = Tolerances::default().gap)]
    pub gap_tol: f64,

    /// Scaled residual at which the SDP solver stops.
    #[arg(long, global = true, default_value_t = Tolerances::default().residual)]
    pub residual_tol: f64,
}

impl Global {
    pub fn config(&self) -> Result<Config, Failure> {
        let tol = Tolerances {
            bound: self.bound_tol,
            geom: self.geom_tol,
            psd: self.psd_tol,
            gap: self.gap_tol,
            residual: self.residual_tol,
        };
        for (name, v) in [
            ("bound-tol", tol.bound),
            ("geom-tol", tol.geom),
            ("psd-tol", tol.psd),
            ("gap-tol", tol.gap),
            ("residual-tol", tol.residual),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Failure::usage(format!("--{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(Config { tol, ..Config::default() })
    }

    pub fn workers(&self) -> Result<usize, Failure> {
        match self.workers {
            Some(0) => Err(Failure::usage("--workers must be positive")),
            Some(w) => Ok(w),
            None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        }
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>, Failure> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("config line {}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k == "config" {
            return Err(Failure::usage(format!("config line {}: invalid key {k:?}", i + 1)));
        }
        out.push((k.replace('_', "-"), v.to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Rewrites argv so that config-file entries come right after the
/// subcommand name. Entries for flags the user passed, or whose
/// environment variable is set, are dropped.
pub fn merge_config(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let entries = parse_config_file(&read_file(&path)?)?;
    let Some(pos) = args.iter().position(|a| cmd.get_subcommands().any(|s| s.get_name() == a.to_string_lossy())) else {
        return Ok(args);
    };
    let sub = cmd.find_subcommand(args[pos].to_string_lossy().as_ref()).expect("found above");
    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in entries {
        let arg = sub
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| Failure::usage(format!("config key {key:?} is not a flag of {}", sub.get_name())))?;
        let given = args[1..].iter().any(|a| {
            let a = a.to_string_lossy();
            a == format!("--{key}") || a.starts_with(&format!("--{key}="))
        });
        if given || arg.get_env().is_some_and(|e| std::env::var_os(e).is_some()) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "1" | "yes" => injected.push(format!("--{key}").into()),
                "false" | "0" | "no" => {}
                _ => return Err(Failure::usage(format!("config key {key:?} expects true or false"))),
            }
        } else {
            injected.push(format!("--{key}={value}").into());
        }
    }
    let mut out = args[..=pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let e = parse_config_file("# sweep\ndim = 2\n\nr=20,40\nresidual_tol=1e-8\n").unwrap();
        assert_eq!(
            e,
            vec![("dim".into(), "2".into()), ("r".into(), "20,40".into()), ("residual-tol".into(), "1e-8".into())]
        );
        assert!(parse_config_file("dim 2").is_err());
        assert!(parse_config_file("=3").is_err());
    }

    #[test]
    fn config_path_forms() {
        let a: Vec<OsString> = ["x", "sweep", "--config", "a.cfg"].iter().map(OsString::from).collect();
        assert_eq!(config_path(&a), Some(PathBuf::from("a.cfg")));
        let a: Vec<OsString> = ["x", "--config=b.cfg", "sweep"].iter().map(OsString::from).collect();
        assert_eq!(config_path(&a), Some(PathBuf::from("b.cfg")));
    }
}
