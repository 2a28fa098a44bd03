//! Sparse SDPA export. The standard-form primal here is the SDPA dual, so
//! the file carries F₀ = −C, Fᵢ = Aᵢ and c = b.

use std::fmt::Write as _;

use super::problem::{BlockSpec, SdpProblem};

pub fn to_sdpa_string(p: &SdpProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", p.num_constraints());
    let _ = writeln!(out, "{}", p.blocks.len());
    let sizes: Vec<String> = p
        .blocks
        .iter()
        .map(|b| match *b {
            BlockSpec::Psd(n) => n.to_string(),
            BlockSpec::Diagonal(n) => format!("-{n}"),
        })
        .collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let rhs: Vec<String> = p.constraints.iter().map(|c| fmt17(c.rhs)).collect();
    let _ = writeln!(out, "{}", rhs.join(" "));
    for e in &p.objective {
        if e.value != 0.0 {
            let _ = writeln!(out, "0 {} {} {} {}", e.block + 1, e.row + 1, e.col + 1, fmt17(-e.value));
        }
    }
    for (i, c) in p.constraints.iter().enumerate() {
        for e in &c.entries {
            if e.value != 0.0 {
                let _ = writeln!(out, "{} {} {} {} {}", i + 1, e.block + 1, e.row + 1, e.col + 1, fmt17(e.value));
            }
        }
    }
    out
}

pub fn write_sdpa(p: &SdpProblem, path: &std::path::Path) -> std::io::Result<()> {
    std::fs::write(path, to_sdpa_string(p))
}

/// Seventeen significant digits, enough to round-trip any f64.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::problem::Entry;

    #[test]
    fn layout_and_round_trip_digits() {
        let mut p = SdpProblem::new(vec![BlockSpec::Psd(2), BlockSpec::Diagonal(1)]);
        p.add_objective(0, 1, 0, 0.1);
        p.add_constraint(vec![Entry::new(0, 0, 0, 1.0), Entry::new(1, 0, 0, -1.0)], 1.0 / 3.0);
        let s = to_sdpa_string(&p);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "1");
        assert_eq!(lines[1], "2");
        assert_eq!(lines[2], "2 -1");
        assert_eq!(lines[3].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert!(lines[4].starts_with("0 1 1 2 "));
        let v: f64 = lines[4].split_whitespace().last().unwrap().parse().unwrap();
        assert_eq!(v, -0.1);
        assert_eq!(lines.len(), 7);
    }
}
