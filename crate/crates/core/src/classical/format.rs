use std::fmt;

use super::{Dist, FuzzyPred, StochChannel};

/// Formats a probability to `sig` significant digits with trailing zeros
/// dropped, e.g. `0.46`, `0.00875`, `0.267`.
pub fn format_prob(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (f64, String)>,
    sig: usize,
) -> fmt::Result {
    for (i, (p, label)) in terms.enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        write!(f, "{}|{label}>", format_prob(p, sig))?;
    }
    Ok(())
}

/// `0.3|t> + 0.7|f>`; the formatter precision sets the significant digits
/// (default 3).
impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(3);
        let terms = self
            .probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, self.space.label(i).join(",")));
        write_terms(f, terms, sig)
    }
}

impl fmt::Display for FuzzyPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(3);
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(
                f,
                "{}: {}",
                self.space.label(i).join(","),
                format_prob(v, sig)
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for StochChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(3);
        for x in 0..self.dom.size() {
            write!(f, "{} ↦ ", self.dom.label(x).join(","))?;
            let terms = self
                .row(x)
                .iter()
                .enumerate()
                .map(|(y, &p)| (p, self.cod.label(y).join(",")));
            write_terms(f, terms, sig)?;
            writeln!(f)?;
        }
        Ok(())
    }
}
