//! Text and JSON formatting of multivectors and diagnostics.

use clifun_core::algebra::{Multivector, Signature};
use clifun_core::polyroots::RootCluster;
use num_complex::Complex64;

/// Blade display name: compact `e123` for n <= 9, bracketed `e[1,2,13]`
/// above; the scalar blade prints as `1`.
pub fn blade_name(mask: usize, n: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let indices: Vec<usize> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect();
    if n <= 9 {
        let digits: String = indices.iter().map(|i| i.to_string()).collect();
        format!("e{digits}")
    } else {
        let list = indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("e[{list}]")
    }
}

/// Round to `digits` significant digits and render without exponent noise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{:.*e}", digits - 1, x).parse().unwrap();
    plain_decimal(rounded)
}

/// Shortest decimal string that parses back to exactly `x`, with any
/// exponent expanded so the result stays inside the expression grammar
/// (where `e` introduces a blade).
pub fn plain_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let shortest = format!("{x:?}");
    let expanded = match shortest.find(['e', 'E']) {
        None => shortest,
        Some(split) => {
            let exp: i32 = shortest[split + 1..].parse().unwrap();
            expand_exponent(&shortest[..split], exp)
        }
    };
    expanded
        .strip_suffix(".0")
        .map(str::to_string)
        .unwrap_or(expanded)
}

fn expand_exponent(mantissa: &str, exp: i32) -> String {
    let negative = mantissa.starts_with('-');
    let unsigned = mantissa.trim_start_matches('-');
    let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    let digits: String = format!("{int_part}{frac_part}");
    let point = int_part.len() as i32 + exp;

    let mut body = String::new();
    if point <= 0 {
        body.push_str("0.");
        for _ in 0..-point {
            body.push('0');
        }
        body.push_str(&digits);
    } else if (point as usize) >= digits.len() {
        body.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            body.push('0');
        }
    } else {
        body.push_str(&digits[..point as usize]);
        body.push('.');
        body.push_str(&digits[point as usize..]);
    }
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Human-readable multivector: grade-lex ordered terms at `digits`
/// significant digits.
pub fn format_mv(mv: &Multivector<f64>, digits: usize) -> String {
    format_terms(
        mv.signature(),
        |mask| {
            let c = mv.coeffs()[mask];
            (c != 0.0).then(|| format_sig(c, digits))
        },
        None,
    )
}

/// Full-precision expression that reparses to the identical coefficients.
pub fn format_expression(mv: &Multivector<f64>) -> String {
    format_terms(
        mv.signature(),
        |mask| {
            let c = mv.coeffs()[mask];
            (c != 0.0).then(|| plain_decimal(c))
        },
        None,
    )
}

/// Complex variant used under --complex-ok: `a+bi` coefficients in
/// parentheses when the imaginary part survives.
pub fn format_mv_complex(mv: &Multivector<Complex64>, digits: usize) -> String {
    format_terms(
        mv.signature(),
        |mask| {
            let c = mv.coeffs()[mask];
            if c == Complex64::new(0.0, 0.0) {
                return None;
            }
            if c.im == 0.0 {
                Some(format_sig(c.re, digits))
            } else {
                Some(format!(
                    "({}{}{}i)",
                    format_sig(c.re, digits),
                    if c.im < 0.0 { "-" } else { "+" },
                    format_sig(c.im.abs(), digits)
                ))
            }
        },
        Some(false),
    )
}

fn format_terms(
    sig: Signature,
    mut coeff_of: impl FnMut(usize) -> Option<String>,
    // Some(false) disables the sign-absorbing join (complex coefficients)
    absorb_signs: Option<bool>,
) -> String {
    let absorb = absorb_signs.unwrap_or(true);
    let mut out = String::new();
    for mask in sig.presentation_order() {
        let Some(text) = coeff_of(mask) else {
            continue;
        };
        let name = blade_name(mask, sig.n());
        let term = if mask == 0 {
            text.clone()
        } else {
            format!("{text}{name}")
        };
        if out.is_empty() {
            out.push_str(&term);
        } else if absorb && text.starts_with('-') {
            out.push_str(" - ");
            out.push_str(term.trim_start_matches('-'));
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// JSON number with 17 significant digits (round-trip exact for doubles).
pub fn json_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

pub struct JsonReport<'a> {
    pub signature: (usize, usize),
    pub function: &'a str,
    /// (blade mask, re, im)
    pub terms: Vec<(usize, f64, f64)>,
    pub include_im: bool,
    pub imag_residual: f64,
    pub path: &'a str,
    pub charpoly: &'a [f64],
    pub roots: &'a [RootCluster],
    pub minpoly: Option<&'a [f64]>,
}

/// Render the report as a single JSON object. Numbers use 17 significant
/// digits; `im` fields appear only when requested.
pub fn render_json(report: &JsonReport) -> String {
    let mut out = String::from("{");
    out.push_str(&format!(
        "\"signature\":[{},{}],\"function\":\"{}\",\"terms\":[",
        report.signature.0, report.signature.1, report.function
    ));
    let n = report.signature.0 + report.signature.1;
    for (i, &(mask, re, im)) in report.terms.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!(
            "{{\"blade\":\"{}\",\"re\":{}",
            blade_name(mask, n),
            json_number(re)
        ));
        if report.include_im {
            out.push_str(&format!(",\"im\":{}", json_number(im)));
        }
        out.push('}');
    }
    out.push_str(&format!(
        "],\"imag_residual\":{},\"path\":\"{}\",\"charpoly\":[",
        json_number(report.imag_residual),
        report.path
    ));
    for (i, &c) in report.charpoly.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&json_number(c));
    }
    out.push_str("],\"roots\":[");
    for (i, cluster) in report.roots.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!(
            "{{\"re\":{},\"im\":{},\"mult\":{}}}",
            json_number(cluster.value.re),
            json_number(cluster.value.im),
            cluster.multiplicity
        ));
    }
    out.push(']');
    if let Some(mu) = report.minpoly {
        out.push_str(",\"minpoly\":[");
        for (i, &c) in mu.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&json_number(c));
        }
        out.push(']');
    }
    out.push('}');
    out
}
