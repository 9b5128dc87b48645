//! Canonical text for phase files and germ files.
//!
//! The printers emit exactly the grammar read by [`crate::parse`]; parsing
//! their output gives back an equal value.

use std::fmt::Write;

use num_traits::{Signed, Zero};
use toric_core::exact::{GaussianRational, PhaseVector, Rational};
use toric_core::germ::{Germ, Spectrum};

/// `re + im I`, with the sign carried by `im`.
pub fn gaussian_text(g: &GaussianRational) -> String {
    format!("{} + {} I", g.re, g.im)
}

/// Right-hand side of a `phi` line: the rational part, then one
/// `c * name` term per nonzero symbol coefficient in basis order.
pub fn phase_terms(phi: &PhaseVector, j: usize) -> String {
    let e = phi.entry(j);
    let mut parts: Vec<(Rational, Option<&str>)> = Vec::new();
    if !e.rational_part().is_zero() || e.coeffs().values().all(Zero::is_zero) {
        parts.push((e.rational_part().clone(), None));
    }
    for (s, c) in e.coeffs() {
        if !c.is_zero() {
            parts.push((c.clone(), Some(phi.basis().name(*s))));
        }
    }
    let mut out = String::new();
    for (k, (c, sym)) in parts.into_iter().enumerate() {
        let shown = if k == 0 {
            c.to_string()
        } else if c.is_negative() {
            out.push_str(" - ");
            (-c).to_string()
        } else {
            out.push_str(" + ");
            c.to_string()
        };
        out.push_str(&shown);
        if let Some(name) = sym {
            write!(out, " * {name}").expect("writing to a string");
        }
    }
    out
}

fn phase_lines(phi: &PhaseVector, out: &mut String) {
    if !phi.basis().is_empty() {
        writeln!(out, "symbols {}", phi.basis().names().join(" ")).expect("writing to a string");
    }
    for j in 0..phi.dim() {
        writeln!(out, "phi {} = {}", j + 1, phase_terms(phi, j)).expect("writing to a string");
    }
}

pub fn print_phase_file(phi: &PhaseVector) -> String {
    let mut out = String::new();
    phase_lines(phi, &mut out);
    out
}

/// Phase-linked germs list their phases as `phi 1..n` with `lambda j = phase j`.
pub fn print_germ_file(germ: &Germ) -> String {
    let mut out = String::new();
    let n = germ.dim();
    if let Spectrum::Phase { phases, .. } = germ.spectrum() {
        phase_lines(phases, &mut out);
    }
    writeln!(out, "dim {n}").expect("writing to a string");
    writeln!(out, "maxdeg {}", germ.degree()).expect("writing to a string");
    for j in 0..n {
        let rhs = match germ.spectrum() {
            Spectrum::Exact(l) => format!("exact {}", gaussian_text(&l[j])),
            Spectrum::Phase { .. } => format!("phase {}", j + 1),
        };
        writeln!(out, "lambda {} = {rhs}", j + 1).expect("writing to a string");
    }
    for (j, &e) in germ.eps().iter().enumerate() {
        if e {
            writeln!(out, "eps {} = 1", j + 1).expect("writing to a string");
        }
    }
    for (j, p) in germ.terms().iter().enumerate() {
        for (q, c) in p.terms() {
            let idx: Vec<String> = q.0.iter().map(u32::to_string).collect();
            writeln!(out, "term {} ({}) {}", j + 1, idx.join(","), gaussian_text(c)).expect("writing to a string");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_germ_file, parse_phase_file};

    #[test]
    fn phase_file_prints_canonically() {
        let text = "symbols sqrt2 i\nphi 1 = 7/6 + 1*sqrt2 - 0 * i\nphi 2 = -3/2 * sqrt2 + 2 * i\nphi 3 = 4\n";
        let phi = parse_phase_file(text).unwrap();
        let printed = print_phase_file(&phi);
        assert_eq!(printed, "symbols sqrt2 i\nphi 1 = 1/6 + 1 * sqrt2\nphi 2 = -3/2 * sqrt2 + 2 * i\nphi 3 = 0\n");
        assert_eq!(parse_phase_file(&printed).unwrap(), phi);
    }

    #[test]
    fn germ_file_prints_canonically() {
        let text = "dim 2\nmaxdeg 3\nlambda 2 = exact 2 - 1/3 I\nlambda 1 = exact 2 + -1/3 I\neps 2 = 1\nterm 2 (0,3) 1 + 0 I\nterm 2 (1,1) 0 - 5 I\n";
        let g = parse_germ_file(text).unwrap();
        let printed = print_germ_file(&g);
        assert_eq!(
            printed,
            "dim 2\nmaxdeg 3\nlambda 1 = exact 2 + -1/3 I\nlambda 2 = exact 2 + -1/3 I\neps 2 = 1\nterm 2 (1,1) 0 + -5 I\nterm 2 (0,3) 1 + 0 I\n"
        );
        assert_eq!(parse_germ_file(&printed).unwrap(), g);
    }
}
