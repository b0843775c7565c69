//! Plain-text summaries of reports.

use std::fmt::Write;

use isopair::innertoral::{Certificate, ClassificationReport, Convexity, ConvexityReport, Verdict};
use isopair::opmodel::{CharPoly, ConjugacyReport, IdentityReport, PurityReport};
use isopair::torusmeasure::{BpeValue, MomentTruncation, Recovered};
use isopair::C64;

fn point(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

pub fn certificate(c: &Certificate) -> String {
    match c {
        Certificate::LinearFactor { factor } => format!("single-variable factor at {}", factor.describe()),
        Certificate::NotSelfInversive { residual } => format!("not self-inversive (fit residual {residual:.1e})"),
        Certificate::FiberViolation { region, z, w, deviation } => match w {
            Some(w) => format!("{region:?} fiber z={} has root w={} (deviation {deviation:.1e})", point(*z), point(*w)),
            None => format!("{region:?} fiber z={} drops degree", point(*z)),
        },
        Certificate::BoundaryAmbiguous { region, z, w, deviation } => {
            format!("{region:?} fiber z={} root w={} within {deviation:.1e} of the circle", point(*z), point(*w))
        }
    }
}

pub fn classification(r: &ClassificationReport) -> String {
    let mut s = String::new();
    match r.inner_toral {
        Verdict::Yes => writeln!(s, "INNER TORAL: yes (max torus deviation {:.1e})", r.max_torus_deviation),
        Verdict::No => writeln!(
            s,
            "INNER TORAL: no ({})",
            r.certificates.first().map_or_else(|| "no certificate".to_string(), certificate)
        ),
        Verdict::Inconclusive => {
            let z = r.certificates.iter().find_map(|c| match c {
                Certificate::BoundaryAmbiguous { z, .. } => Some(point(*z)),
                _ => None,
            });
            writeln!(
                s,
                "INCONCLUSIVE: {} boundary-ambiguous roots at z={}",
                r.ambiguous_count,
                z.unwrap_or_else(|| "?".into())
            )
        }
    }
    .unwrap();
    writeln!(s, "toral: {}{}", r.toral, if r.toral_consistent { "" } else { " (sampled check disagrees)" }).unwrap();
    writeln!(s, "violations: {}, ambiguous: {}", r.violation_count, r.ambiguous_count).unwrap();
    writeln!(s, "samples: {} (tol {:e})", r.samples_used, r.tol).unwrap();
    s
}

pub fn convexity(r: &ConvexityReport) -> String {
    let head = match r.verdict {
        Convexity::Convex => "POLYNOMIALLY CONVEX: yes",
        Convexity::NotConvex => "POLYNOMIALLY CONVEX: no",
        Convexity::Inconclusive => "INCONCLUSIVE",
    };
    let mut s = format!("{head} ({})\n", r.reason);
    if let Some(f) = r.inner_toral_factor.as_ref().and_then(|f| f.certificate.as_ref()) {
        match &f.exact {
            Some(e) => writeln!(s, "inner toral factor: {e}").unwrap(),
            None => writeln!(s, "inner toral factor (approximate): {} residual {:.1e}", f.approx, f.residual).unwrap(),
        }
    }
    s
}

pub fn identity(r: &IdentityReport) -> String {
    match (r.exact, r.passed) {
        (true, true) => format!("IDENTITY {}: exact (rational arithmetic)\n", r.identity_name),
        (true, false) => format!(
            "IDENTITY {}: FAILS (rational arithmetic, residual {:.3e} over {} columns)\n",
            r.identity_name, r.max_residual, r.samples
        ),
        (false, ok) => format!(
            "IDENTITY {}: {} (max residual {:.1e}, tol {:e}, {} samples)\n",
            r.identity_name,
            if ok { "holds" } else { "FAILS" },
            r.max_residual,
            r.tol,
            r.samples
        ),
    }
}

pub fn purity(r: &PurityReport) -> String {
    let mut s = format!(
        "PURE: {} (min stacked residual {:.1e}, {} samples)\n",
        if r.pure { "yes" } else { "no" },
        r.min_residual,
        r.samples
    );
    if let Some(w) = &r.warning {
        writeln!(s, "warning: {w}").unwrap();
    }
    s
}

pub fn minpoly(c: &CharPoly) -> String {
    format!("q_min = {}\nq_full = {}\n", c.q_min, c.q_full)
}

pub fn gram(g: &MomentTruncation) -> String {
    let n = g.monomials.len();
    format!(
        "GRAM: {n}x{n} at maxdeg ({}, {}), exact, hermitian: {}\n",
        g.maxdeg.0,
        g.maxdeg.1,
        g.is_hermitian()
    )
}

pub fn recovered(r: &Recovered, rational: Option<&str>) -> String {
    let mut s = format!("RELATION at bidegree ({}, {}): sigma_min {:.1e}\n", r.bidegree.0, r.bidegree.1, r.sigma_min);
    match rational {
        Some(q) => writeln!(s, "q = {q}").unwrap(),
        None => writeln!(s, "q = {}", r.q).unwrap(),
    }
    s
}

pub fn bpe(b: &BpeValue) -> String {
    match b.value {
        Some(v) => format!("POINT EVALUATION: bounded, norm {v:.9} at maxdeg ({}, {})\n", b.maxdeg.0, b.maxdeg.1),
        None => format!(
            "POINT EVALUATION: unbounded (a polynomial vanishing on the support is {:.1e} here, maxdeg ({}, {}))\n",
            b.null_defect, b.maxdeg.0, b.maxdeg.1
        ),
    }
}

pub fn conjugacy(r: &ConjugacyReport) -> String {
    let mut s = identity(&r.identity);
    writeln!(
        s,
        "minimal polynomials {}: {} / {}",
        if r.same_minimal_polynomial { "agree" } else { "DIFFER" },
        r.q_min_phi,
        r.q_min_psi
    )
    .unwrap();
    s
}
