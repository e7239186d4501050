use std::io::Read;
use std::process::ExitCode;

use clap::Parser;

use clifun_cli::{format_mv, format_mv_complex, format_sig, render_json, JsonReport, ParseError};
use clifun_core::algebra::{Multivector, Signature};
use clifun_core::charpoly::{determinant, faddeev_leverrier, mv_inverse};
use clifun_core::error::ClifError;
use clifun_core::polyroots::{find_roots, RootCluster};
use clifun_core::specfun::{
    evaluate, is_diagonalizable, EvalOptions, Evaluation, Method, RegularizationConfig,
    ScalarFunction,
};

/// Evaluate exponentials, elementary and special functions of Clifford
/// algebra multivectors via characteristic polynomial roots.
#[derive(Parser)]
#[command(name = "clifun", version)]
struct Args {
    /// Algebra signature `p,q` (p generators square to +1, q to -1)
    #[arg(long, value_name = "P,Q")]
    sig: String,

    /// exp|log|sinh|cosh|sin|cos|asinh|sqrt|pow:<r>|besselj0|charpoly|minpoly|det|inverse
    #[arg(long = "fn", value_name = "NAME")]
    function: String,

    /// Spectral-sum form used on distinct roots: coordinate|basisfree|auto
    #[arg(long, default_value = "auto", value_name = "FORM")]
    method: String,

    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,

    /// Print diagnostics: char poly, roots, minimal poly, path, residual
    #[arg(long)]
    verbose: bool,

    /// Realification residual bound factor (default 1e-8)
    #[arg(long, value_name = "TOL")]
    imag_tol: Option<f64>,

    /// Root clustering tolerance (default 1e-6 (1 + max |root|))
    #[arg(long, value_name = "TOL")]
    cluster_tol: Option<f64>,

    /// Perturbation sizes for defective inputs, comma separated, decreasing
    #[arg(long, value_name = "A,B,C", value_delimiter = ',')]
    eps_seq: Option<Vec<f64>>,

    /// Keep complex coefficients instead of raising a realification error
    #[arg(long)]
    complex_ok: bool,

    /// Multivector expression, e.g. "8 - 6e2 + 5e12"; `-` reads stdin
    #[arg(allow_hyphen_values = true)]
    expression: String,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn from_parse(err: ParseError, source: &str) -> Failure {
    Failure {
        code: 2,
        message: err.annotated(source),
    }
}

fn from_core(err: ClifError) -> Failure {
    let code = match &err {
        ClifError::Domain { .. }
        | ClifError::SingularMultivector { .. }
        | ClifError::NearSingularResolvent { .. }
        | ClifError::DefectiveOrDegenerate => 3,
        ClifError::Regularization(_) | ClifError::PerturbationFailure => 4,
        ClifError::UnsupportedDimension { .. }
        | ClifError::GradeOutOfRange { .. }
        | ClifError::InvalidBladeIndex { .. }
        | ClifError::DuplicateBladeIndex(_)
        | ClifError::CoefficientLength { .. }
        | ClifError::DeterminantUnsupported(_) => 2,
        _ => 5,
    };
    Failure {
        code,
        message: format!("error: {err}"),
    }
}

fn run(args: &Args) -> Result<String, Failure> {
    let sig = parse_signature(&args.sig)?;
    let source = read_expression(&args.expression)?;
    let mv = clifun_cli::parse_mv(&source, sig).map_err(|e| from_parse(e, &source))?;

    match args.function.as_str() {
        "charpoly" => report_charpoly(args, sig, &mv),
        "minpoly" => report_minpoly(args, sig, &mv),
        "det" => report_det(args, sig, &mv),
        "inverse" => report_inverse(args, sig, &mv),
        name => {
            let function = scalar_function(name)?;
            let opts = eval_options(args)?;
            let evaluation = evaluate(&mv, &function, &opts).map_err(from_core)?;
            Ok(render_evaluation(args, sig, name, &evaluation))
        }
    }
}

fn parse_signature(text: &str) -> Result<Signature, Failure> {
    let (p, q) = text
        .split_once(',')
        .ok_or_else(|| usage(format!("error: --sig expects `p,q`, got `{text}`")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("error: invalid signature component `{s}`")))
    };
    Signature::new(parse(p)?, parse(q)?).map_err(from_core)
}

fn read_expression(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| usage(format!("error: failed to read stdin: {e}")))?;
        Ok(buffer.trim().to_string())
    } else {
        Ok(arg.to_string())
    }
}

fn scalar_function(name: &str) -> Result<ScalarFunction, Failure> {
    Ok(match name {
        "exp" => ScalarFunction::exp(),
        "log" => ScalarFunction::log(),
        "sinh" => ScalarFunction::sinh(),
        "cosh" => ScalarFunction::cosh(),
        "sin" => ScalarFunction::sin(),
        "cos" => ScalarFunction::cos(),
        "asinh" => ScalarFunction::asinh(),
        "sqrt" => ScalarFunction::sqrt(),
        "besselj0" => ScalarFunction::bessel_j0(),
        _ => {
            if let Some(r) = name.strip_prefix("pow:") {
                let r: f64 = r
                    .parse()
                    .map_err(|_| usage(format!("error: invalid exponent in `{name}`")))?;
                ScalarFunction::pow_fraction(r)
            } else {
                return Err(usage(format!("error: unknown function `{name}`")));
            }
        }
    })
}

fn eval_options(args: &Args) -> Result<EvalOptions, Failure> {
    let method = match args.method.as_str() {
        "auto" => Method::Auto,
        "coordinate" => Method::Coordinate,
        "basisfree" => Method::BasisFree,
        other => return Err(usage(format!("error: unknown method `{other}`"))),
    };
    let mut opts = EvalOptions {
        method,
        complex_ok: args.complex_ok,
        cluster_tol: args.cluster_tol,
        ..EvalOptions::default()
    };
    if let Some(tol) = args.imag_tol {
        opts.imag_tol = tol;
    }
    if let Some(eps) = &args.eps_seq {
        opts.regularization = RegularizationConfig {
            eps_sequence: eps.clone(),
            ..RegularizationConfig::default()
        };
    }
    Ok(opts)
}

fn render_evaluation(args: &Args, sig: Signature, name: &str, ev: &Evaluation) -> String {
    let minpoly: Option<Vec<f64>> = ev.minimal_poly.as_ref().map(|m| m.coeffs().to_vec());
    if args.json {
        let terms = json_terms(&ev.complex_value, args.complex_ok);
        return render_json(&JsonReport {
            signature: (sig.p(), sig.q()),
            function: name,
            terms,
            include_im: args.complex_ok,
            imag_residual: ev.imag_residual,
            path: &ev.path.to_string(),
            charpoly: ev.charpoly.coeffs(),
            roots: ev.roots.clusters(),
            minpoly: minpoly.as_deref(),
        });
    }
    let mut out = if args.complex_ok && ev.imag_residual > 0.0 {
        format_mv_complex(&ev.complex_value, 6)
    } else {
        format_mv(&ev.value, 6)
    };
    if args.verbose {
        out.push_str(&format!("\npath: {}", ev.path));
        out.push_str(&format!(
            "\ncharacteristic polynomial C(0..{}): {}",
            ev.charpoly.degree(),
            join_numbers(ev.charpoly.coeffs())
        ));
        out.push_str(&format!("\nroots: {}", join_roots(ev.roots.clusters())));
        if let Some(mu) = &minpoly {
            out.push_str(&format!(
                "\nminimal polynomial (ascending): {}",
                join_numbers(mu)
            ));
        }
        if let Some(diag) = ev.diagonalizable {
            out.push_str(&format!("\ndiagonalizable: {diag}"));
        }
        out.push_str(&format!("\nimaginary residual: {:.3e}", ev.imag_residual));
    }
    out
}

fn report_charpoly(args: &Args, sig: Signature, mv: &Multivector<f64>) -> Result<String, Failure> {
    let chi = faddeev_leverrier(mv);
    let roots = find_roots(&chi).map_err(from_core)?;
    if args.json {
        return Ok(render_json(&JsonReport {
            signature: (sig.p(), sig.q()),
            function: "charpoly",
            terms: vec![],
            include_im: false,
            imag_residual: 0.0,
            path: "direct",
            charpoly: chi.coeffs(),
            roots: roots.clusters(),
            minpoly: None,
        }));
    }
    let mut out = format!(
        "characteristic polynomial C(0..{}): {}",
        chi.degree(),
        join_numbers(chi.coeffs())
    );
    if args.verbose {
        out.push_str(&format!("\nroots: {}", join_roots(roots.clusters())));
    }
    Ok(out)
}

fn report_minpoly(args: &Args, sig: Signature, mv: &Multivector<f64>) -> Result<String, Failure> {
    let report = is_diagonalizable(mv).map_err(from_core)?;
    let chi = faddeev_leverrier(mv);
    if args.json {
        return Ok(render_json(&JsonReport {
            signature: (sig.p(), sig.q()),
            function: "minpoly",
            terms: vec![],
            include_im: false,
            imag_residual: 0.0,
            path: "direct",
            charpoly: chi.coeffs(),
            roots: report.mu_roots.clusters(),
            minpoly: Some(report.minimal_poly.coeffs()),
        }));
    }
    let mut out = format!(
        "minimal polynomial (ascending): {}",
        join_numbers(report.minimal_poly.coeffs())
    );
    if args.verbose {
        out.push_str(&format!(
            "\nroots: {}",
            join_roots(report.mu_roots.clusters())
        ));
        out.push_str(&format!("\ndiagonalizable: {}", report.diagonalizable));
        if let Some(warning) = report.minimal_poly.rank_warning() {
            out.push_str(&format!("\nwarning: {warning}"));
        }
    }
    Ok(out)
}

fn report_det(args: &Args, sig: Signature, mv: &Multivector<f64>) -> Result<String, Failure> {
    let det = determinant(mv);
    if args.json {
        let chi = faddeev_leverrier(mv);
        let roots = find_roots(&chi).map_err(from_core)?;
        return Ok(render_json(&JsonReport {
            signature: (sig.p(), sig.q()),
            function: "det",
            terms: vec![(0, det, 0.0)],
            include_im: false,
            imag_residual: 0.0,
            path: "direct",
            charpoly: chi.coeffs(),
            roots: roots.clusters(),
            minpoly: None,
        }));
    }
    Ok(format_sig(det, 6))
}

fn report_inverse(args: &Args, sig: Signature, mv: &Multivector<f64>) -> Result<String, Failure> {
    let inverse = mv_inverse(mv).map_err(from_core)?;
    if args.json {
        let chi = faddeev_leverrier(mv);
        let roots = find_roots(&chi).map_err(from_core)?;
        let terms = json_terms(&inverse.to_complex(), false);
        return Ok(render_json(&JsonReport {
            signature: (sig.p(), sig.q()),
            function: "inverse",
            terms,
            include_im: false,
            imag_residual: 0.0,
            path: "direct",
            charpoly: chi.coeffs(),
            roots: roots.clusters(),
            minpoly: None,
        }));
    }
    Ok(format_mv(&inverse, 6))
}

fn json_terms(
    mv: &Multivector<num_complex::Complex64>,
    include_im: bool,
) -> Vec<(usize, f64, f64)> {
    mv.signature()
        .presentation_order()
        .into_iter()
        .filter_map(|mask| {
            let c = mv.coeffs()[mask];
            let keep = c.re != 0.0 || (include_im && c.im != 0.0);
            keep.then_some((mask, c.re, c.im))
        })
        .collect()
}

fn join_numbers(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| format_sig(v, 6))
        .collect::<Vec<_>>()
        .join(", ")
}

fn join_roots(clusters: &[RootCluster]) -> String {
    clusters
        .iter()
        .map(|c| {
            let value = if c.value.im == 0.0 {
                format_sig(c.value.re, 6)
            } else {
                format!(
                    "{}{}{}i",
                    format_sig(c.value.re, 6),
                    if c.value.im < 0.0 { "-" } else { "+" },
                    format_sig(c.value.im.abs(), 6)
                )
            };
            format!("{value} (x{})", c.multiplicity)
        })
        .collect::<Vec<_>>()
        .join(", ")
}
