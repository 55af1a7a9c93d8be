//! One function per subcommand, each producing every output format.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use lapseq::diffeq::{self, DifferenceEquation, Rhs, SolveRoute};
use lapseq::exact::{factorial, gauss_to_f64, rat_to_f64, GaussRational};
use lapseq::identities::{self, Identity};
use lapseq::laguerre;
use lapseq::nabla;
use lapseq::quadrature::QuadOptions;
use lapseq::residue::{self, RationalFn};
use lapseq::special::{self, BernoulliVariant};
use lapseq::suite::{self, Fault, Profile, SuiteConfig};
use lapseq::transform::{self, ClosedImage, ImageRule, SourceFunction};

use crate::output::{csv, document, float, Style};
use crate::{
    Cli, Command, DiffeqArgs, FaultArg, FnName, FunctionArgs, IdentityArgs, LaguerreArgs, MappedArgs, NablaArgs,
    NablaOp, ProfileArg, ResidueArgs, Route, SuiteArgs, TransformArgs, Variant, ZetaArgs,
};

#[derive(Debug)]
pub struct UsageError(pub String);

#[derive(Debug)]
pub enum Failure {
    Usage(UsageError),
    Compute(lapseq::Error),
}

impl From<lapseq::Error> for Failure {
    fn from(e: lapseq::Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(UsageError(msg.into())))
}

/// A finished command: the document in each format and the verdict of any
/// verification it performed.
pub struct Outcome {
    pub document: Value,
    pub csv: String,
    pub text: String,
    pub verified: bool,
    pub failure: Option<String>,
}

impl Outcome {
    fn new(document: Value, csv: String) -> Self {
        let text = text_of(&document);
        Outcome { document, csv, text, verified: true, failure: None }
    }

    fn verdict(mut self, ok: bool, reason: impl FnOnce() -> String) -> Self {
        self.verified = ok;
        if !ok {
            self.failure = Some(reason());
        }
        self
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Transform(args) => transform_cmd(args, cli.tol),
        Command::InvertLaguerre(args) => invert_laguerre(args, cli.tol),
        Command::InvertResidue(args) => invert_residue(args),
        Command::Nabla(args) => nabla_cmd(args),
        Command::SolveDiffeq(args) => solve_diffeq(args, cli.tol),
        Command::VerifyMapped(args) => verify_mapped(args),
        Command::Zeta(args) => zeta(args, cli.tol),
        Command::VerifyIdentities(args) => verify_identities(args),
        Command::Table => Ok(table()),
        Command::Suite(args) => Ok(run_suite(args)),
    }
}

/// Quadrature aiming at `max(tol, tol·|φ_n|)` for every entry.
fn mixed(tol: f64) -> QuadOptions {
    QuadOptions { abs_tol: tol, rel_tol: tol, max_abs_error: f64::INFINITY, max_panels: 800 }
}

fn source_and_image(args: &FunctionArgs) -> Result<(SourceFunction, Option<ClosedImage>), Failure> {
    let (a, b) = (args.a, args.b);
    let image = match args.function {
        FnName::Const => ClosedImage::composite(vec![(a, ImageRule::Exp { a: 0.0 })])?,
        FnName::Exp => ClosedImage::exp(a)?,
        FnName::Power => ClosedImage::power(a)?,
        FnName::PowerExp => ClosedImage::power_exp(a, b)?,
        FnName::Sin => ClosedImage::sin(a)?,
        FnName::Cos => ClosedImage::cos(a)?,
        FnName::Log => ClosedImage::log(),
        FnName::OneOverOneMinusExpNeg => return Ok((SourceFunction::one_over_one_minus_exp_neg(), None)),
        FnName::CustomTableRow => {
            let rows = suite::table_rows();
            let names: Vec<&str> = rows.iter().map(|r| r.0).collect();
            let Some(name) = &args.row else {
                return usage(format!("--fn custom-table-row needs --row, one of: {}", names.join(", ")));
            };
            let Some((_, rule)) = rows.into_iter().find(|r| r.0 == name) else {
                return usage(format!("unknown row `{name}`; expected one of: {}", names.join(", ")));
            };
            let image = ClosedImage::new(rule)?;
            return Ok((image.source_function(), Some(image)));
        }
    };
    let source = match args.function {
        FnName::Const => SourceFunction::constant(a),
        _ => image.source_function(),
    };
    Ok((source, Some(image)))
}

fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json!(x)).collect())
}

fn transform_cmd(args: &TransformArgs, tol: Option<f64>) -> Result<Outcome, Failure> {
    let tol = tol.unwrap_or(1e-10);
    let (f, image) = source_and_image(&args.function)?;
    let seq = transform::forward_transform_with(&f, args.s, args.n, &mixed(tol))?;
    let closed: Option<Vec<f64>> = image.as_ref().map(|im| (0..=args.n).map(|n| im.eval(n, args.s)).collect());
    let gaps: Option<Vec<f64>> = closed.as_ref().map(|c| seq.values.iter().zip(c).map(|(v, c)| (v - c).abs()).collect());
    let agrees = closed.as_ref().map(|c| {
        (0..=args.n).all(|n| (seq.values[n] - c[n]).abs() <= seq.errors[n] + tol.max(tol * c[n].abs()) + 1e-15 * c[n].abs())
    });
    let doc = document(
        "transform",
        &json!({
            "function": f.label,
            "s": seq.s,
            "tol": seq.tol,
            "n_max": args.n,
            "values": floats(&seq.values),
            "errors": floats(&seq.errors),
            "closed_form": closed.as_deref().map(floats),
            "max_gap": gaps.as_ref().map(|g| g.iter().copied().fold(0.0, f64::max)),
            "agrees_with_closed_form": agrees,
        }),
    );
    let rows = (0..=args.n).map(|n| {
        let mut row = vec![n.to_string(), float(seq.values[n]), float(seq.errors[n])];
        if let Some(c) = &closed {
            row.push(float(c[n]));
        }
        row
    });
    let header: &[&str] = if closed.is_some() { &["n", "phi_n", "error", "closed_form"] } else { &["n", "phi_n", "error"] };
    let out = Outcome::new(doc, csv(header, rows));
    Ok(out.verdict(agrees != Some(false), || format!("quadrature and closed form of {} differ beyond {tol:e}", f.label)))
}

fn invert_laguerre(args: &LaguerreArgs, tol: Option<f64>) -> Result<Outcome, Failure> {
    let tol = tol.unwrap_or(1e-12);
    let (f, _) = source_and_image(&args.function)?;
    let phi = transform::forward_transform_with(&f, args.s, args.n, &mixed(tol))?;
    let coeffs = laguerre::coefficients_from_image(&phi)?;
    let direct: Vec<f64> =
        (0..=args.n).map(|k| laguerre::coefficient_by_quadrature(&f, args.s, k)).collect::<lapseq::Result<_>>()?;
    let residual = laguerre::weighted_l2_residual(&f, &coeffs)?;
    let mut points = Vec::new();
    for &x in &args.x {
        points.push(json!({"x": x, "reconstruction": laguerre::reconstruct(&coeffs, x)?, "source": f.eval(x)}));
    }
    let doc = document(
        "invert-laguerre",
        &json!({
            "function": f.label,
            "s": args.s,
            "coefficients": floats(&coeffs.a),
            "coefficients_by_direct_quadrature": floats(&direct),
            "weighted_l2_residual": residual,
            "reconstruction": points,
        }),
    );
    let rows = (0..=args.n).map(|k| vec![k.to_string(), float(coeffs.a[k]), float(direct[k])]);
    Ok(Outcome::new(doc, csv(&["k", "a_k", "a_k_direct"], rows)))
}

fn gauss_text(z: &GaussRational) -> String {
    let imag = |q: &BigRational| {
        let q_abs = if q.is_negative() { -q.clone() } else { q.clone() };
        if q_abs.is_one() {
            "i".to_string()
        } else if q_abs.is_integer() {
            format!("{q_abs}i")
        } else {
            format!("({q_abs})i")
        }
    };
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}{}", if z.im.is_negative() { "-" } else { "" }, imag(&z.im)),
        (false, false) => format!("({} {} {})", z.re, if z.im.is_negative() { "-" } else { "+" }, imag(&z.im)),
    }
}

fn invert_residue(args: &ResidueArgs) -> Result<Outcome, Failure> {
    let (f, image) = source_and_image(&args.function)?;
    let Some(image) = image else {
        return usage(format!("{} has no rational closed-form image to invert", f.label));
    };
    let report = residue::residue_inverse(|k| RationalFn::from_closed_image(&image, k), args.n)?;
    let gap = (1..=40)
        .map(|i| {
            let t = i as f64 * 0.25;
            let want = f.eval(t);
            (report.function.eval(t) - want).abs() / want.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    let formula = report
        .function
        .terms
        .iter()
        .map(|t| {
            // c t^{m-1}/(m-1)! with the factorial folded into the coefficient
            let k = t.m - 1;
            let fact = BigRational::from_integer(factorial(k as u64));
            let c = GaussRational::new(&t.c.re / &fact, &t.c.im / &fact);
            let coef = if c.is_one() { String::new() } else { format!("{} ", gauss_text(&c)) };
            let power = match k {
                0 => String::new(),
                1 => "t ".into(),
                k => format!("t^{k} "),
            };
            let rate = if t.p.is_zero() { String::new() } else { format!("e^({} t)", gauss_text(&t.p)) };
            let term = format!("{coef}{power}{rate}");
            if term.is_empty() { "1".to_string() } else { term.trim_end().to_string() }
        })
        .collect::<Vec<_>>()
        .join(" + ")
        .replace("+ -", "- ");
    let mut doc = document("invert-residue", &report);
    let map = doc.as_object_mut().expect("object");
    map.insert("formula".into(), json!(if formula.is_empty() { "0".to_string() } else { formula }));
    map.insert("max_source_gap".into(), json!(gap));
    let rows = report.function.terms.iter().map(|t| {
        let (c, p) = (gauss_to_f64(&t.c), gauss_to_f64(&t.p));
        vec![float(c.re), float(c.im), float(p.re), float(p.im), t.m.to_string()]
    });
    let ok = report.n_independent && report.conjugate_closed && gap <= 1e-10;
    let out = Outcome::new(doc, csv(&["re_c", "im_c", "re_p", "im_p", "m"], rows));
    Ok(out.verdict(ok, || format!("inverse of {} is not probe-independent, real, or faithful (gap {gap:e})", f.label)))
}

fn nabla_cmd(args: &NablaArgs) -> Result<Outcome, Failure> {
    let (phi, s, p) = (&args.values, &args.s, args.p);
    let start = if args.op == NablaOp::Derivative { 0 } else { p };
    if start >= phi.len() {
        return usage(format!("--values needs more than {start} entries for p = {p}"));
    }
    let mut indices = Vec::new();
    let mut exact: Vec<BigRational> = Vec::new();
    for n in start..phi.len() {
        indices.push(n);
        exact.push(match args.op {
            NablaOp::Power => nabla::nabla_power(phi, p, s, n)?,
            NablaOp::Unshift => nabla::unshift_via_nabla(phi, p, s, n)?,
            NablaOp::Derivative => nabla::derivative_image(phi, p, s, n, &args.init)?,
        });
    }
    let reconstructs = args.op != NablaOp::Unshift || indices.iter().zip(&exact).all(|(&n, v)| *v == phi[n - p]);
    let op = match args.op {
        NablaOp::Power => "power",
        NablaOp::Unshift => "unshift",
        NablaOp::Derivative => "derivative",
    };
    let doc = document(
        "nabla",
        &json!({
            "op": op,
            "p": p,
            "s": s.to_string(),
            "indices": indices,
            "exact": exact.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "values": exact.iter().map(rat_to_f64).collect::<Vec<_>>(),
        }),
    );
    let rows = indices.iter().zip(&exact).map(|(n, q)| vec![n.to_string(), q.to_string(), float(rat_to_f64(q))]);
    let out = Outcome::new(doc, csv(&["n", "exact", "value"], rows));
    Ok(out.verdict(reconstructs, || "unshift did not reproduce the shifted sequence".into()))
}

fn solve_diffeq(args: &DiffeqArgs, tol: Option<f64>) -> Result<Outcome, Failure> {
    let tol = tol.unwrap_or(1e-9);
    let rhs = match (args.rhs.is_empty(), args.geometric.as_slice()) {
        (false, _) => Rhs::Explicit(args.rhs.clone()),
        (true, []) => Rhs::Zero,
        (true, [c, r]) => Rhs::Geometric { c: c.clone(), r: r.clone() },
        (true, _) => return usage("--geometric takes exactly two values, c,r"),
    };
    let eq = DifferenceEquation::new(args.coeffs.clone(), rhs, args.init.clone())?;
    let route = match args.route {
        Route::Transform => SolveRoute::Transform,
        Route::Direct => SolveRoute::Direct,
    };
    let sol = diffeq::solve_with(&eq, args.check, route)?;
    let values = sol.values(sol.n_check);
    let formula = sol
        .terms
        .iter()
        .map(|t| {
            // fitted constants of irrational bases are 300-bit roundings; show them as doubles
            let constant = |c: &GaussRational| {
                if t.exact {
                    gauss_text(c)
                } else {
                    let z = gauss_to_f64(c);
                    if z.im == 0.0 { format!("{}", z.re) } else { format!("({} + {}i)", z.re, z.im) }
                }
            };
            let poly = t.poly.iter().enumerate().map(|(j, c)| match j {
                0 => constant(c),
                1 => format!("{} n", constant(c)),
                j => format!("{} n^{j}", constant(c)),
            });
            let base = t.base_surd.as_ref().map_or_else(|| format!("{:?}", gauss_to_f64(&t.base)), |s| s.to_string());
            format!("[{}] ({base})^n", poly.collect::<Vec<_>>().join(" + "))
        })
        .collect::<Vec<_>>()
        .join(" + ");
    let mut doc = document("solve-diffeq", &sol);
    let map = doc.as_object_mut().expect("object");
    map.insert("formula".into(), json!(formula));
    map.insert("values".into(), json!(values.iter().map(|z| gauss_to_f64(z).re).collect::<Vec<_>>()));
    let rows = values.iter().enumerate().map(|(n, z)| {
        let exact = if sol.exact { gauss_text(z) } else { String::new() };
        vec![n.to_string(), float(gauss_to_f64(z).re), exact]
    });
    let residual = sol.residual;
    let out = Outcome::new(doc, csv(&["n", "f_n", "exact"], rows));
    Ok(out.verdict(residual <= tol, || format!("residual {residual:e} exceeds {tol:e}")))
}

fn verify_mapped(args: &MappedArgs) -> Result<Outcome, Failure> {
    let report = diffeq::verify_mapped_equation(args.case)?;
    let rows = report.checks.iter().map(|c| {
        vec![c.name.clone(), float(c.max_discrepancy), float(c.tolerance), c.holds.to_string(), c.required.to_string()]
    });
    let failing: Vec<String> = report.checks.iter().filter(|c| c.required && !c.holds).map(|c| c.name.clone()).collect();
    let out = Outcome::new(
        document("verify-mapped", &report),
        csv(&["check", "max_discrepancy", "tolerance", "holds", "required"], rows),
    );
    Ok(out.verdict(report.passed, || format!("case {}: {}", args.case, failing.join(", "))))
}

fn zeta(args: &ZetaArgs, tol: Option<f64>) -> Result<Outcome, Failure> {
    let tol = tol.unwrap_or(1e-8);
    let em = special::hurwitz_em(args.s, args.a)?;
    let integral = if args.s > 1.0 { Some(special::hurwitz_integral(args.s, args.a)?) } else { None };
    let agree = integral.map(|i| (i.value - em.value).abs() <= tol + i.error_estimate + em.error_estimate);
    let series = match args.bernoulli_terms {
        Some(k) => {
            let variant = match args.variant {
                Variant::K => BernoulliVariant::KFactorial,
                Variant::KMinusOne => BernoulliVariant::KMinusOneFactorial,
            };
            Some(special::hurwitz_bernoulli_representation(args.s, args.a, k, variant)?)
        }
        None => None,
    };
    let doc = document(
        "zeta",
        &json!({
            "s": args.s,
            "a": args.a,
            "euler_maclaurin": em,
            "integral": integral,
            "agree": agree,
            "bernoulli_series": series,
        }),
    );
    let row = vec![float(args.s), float(args.a), float(em.value), integral.map_or(String::new(), |i| float(i.value))];
    let out = Outcome::new(doc, csv(&["s", "a", "euler_maclaurin", "integral"], [row]));
    Ok(out.verdict(agree != Some(false), || format!("integral and Euler–Maclaurin values differ beyond {tol:e}")))
}

fn verify_identities(args: &IdentityArgs) -> Result<Outcome, Failure> {
    let ids: Vec<Identity> = if args.which == "all" {
        Identity::ALL.to_vec()
    } else {
        match Identity::parse(&args.which) {
            Some(id) => vec![id],
            None => return usage(format!("unknown identity `{}`; use 1, 2, 3, laguerre, bonnet, table or all", args.which)),
        }
    };
    let reports: Vec<_> = ids.iter().map(|&id| identities::sweep(id, args.max_m.unwrap_or(id.default_range()))).collect();
    let all_passed = reports.iter().all(|r| r.all_passed);
    let doc = if reports.len() == 1 {
        document("verify-identities", &reports[0])
    } else {
        document("verify-identities", &json!({"all_passed": all_passed, "reports": reports}))
    };
    let rows = reports.iter().map(|r| {
        vec![
            serde_json::to_value(r.identity).expect("identity").as_str().unwrap_or_default().to_string(),
            format!("\"{}\"", r.range),
            r.checked.to_string(),
            r.all_passed.to_string(),
            r.counterexamples.len().to_string(),
        ]
    });
    let failing: Vec<String> = reports.iter().filter(|r| !r.all_passed).map(|r| format!("{:?}", r.identity)).collect();
    let out = Outcome::new(doc, csv(&["identity", "range", "checked", "all_passed", "counterexamples"], rows));
    Ok(out.verdict(all_passed, || format!("counterexamples found for {}", failing.join(", "))))
}

const TABLE: [(&str, &str, &str, &str); 9] = [
    ("exp", "e^{at}", "1/(s-a)^{n+1}", "s > a"),
    ("exp-shift", "e^{at} f(t)", "φ_n(s-a)", "s > a + abscissa of f"),
    ("power", "t^a, a > -1", "Γ(a+n+1) / (s^{n+a+1} Γ(n+1))", "s > 0"),
    ("power-exp", "t^a e^{-bt}", "Γ(a+n+1) / ((s+b)^{n+a+1} Γ(n+1))", "s > -b"),
    ("sin", "sin(at)", "sin((n+1) arctan(a/s)) / (s²+a²)^{(n+1)/2}", "s > 0"),
    ("cos", "cos(at)", "cos((n+1) arctan(a/s)) / (s²+a²)^{(n+1)/2}", "s > 0"),
    ("delay", "f(t-a) for t > a, 0 before", "e^{-as} Σ_k a^{n-k}/(n-k)! φ_k(s)", "as for f"),
    ("log", "ln t", "(H_n - γ - ln s) / s^{n+1}", "s > 0"),
    ("composite", "Σ c_i f_i(t)", "Σ c_i φ_{i,n}(s)", "largest abscissa of the f_i"),
];

fn table() -> Outcome {
    let examples = suite::table_rows();
    let rows: Vec<Value> = TABLE
        .iter()
        .zip(&examples)
        .map(|((name, source, image, region), (_, rule))| {
            json!({"name": name, "source": source, "image": image, "converges_for": region, "example": rule})
        })
        .collect();
    let doc = document("table", &json!({ "rows": rows }));
    let csv_rows = TABLE.iter().map(|(name, source, image, region)| {
        [name, source, image, region].iter().map(|c| format!("\"{c}\"")).collect()
    });
    let text = TABLE.iter().map(|(name, source, image, region)| format!("{name:<10} {source:<28} ↦ {image}   ({region})\n")).collect();
    Outcome { text, ..Outcome::new(doc, csv(&["name", "source", "image", "converges_for"], csv_rows)) }
}

fn run_suite(args: &SuiteArgs) -> Outcome {
    let config = SuiteConfig {
        profile: match args.profile {
            ProfileArg::Quick => Profile::Quick,
            ProfileArg::Full => Profile::Full,
        },
        fault: args.inject_fault.map(|FaultArg::TableCoefficient| Fault::TableCoefficient),
    };
    let report = suite::run_suite(&config);
    let style = Style::detect();
    let mut text = String::new();
    for c in &report.criteria {
        text.push_str(&format!(
            "{:>2} {} {:<46} {:>10.3e} / {:<8.0e} {:>7.2}s  {}\n",
            c.id,
            style.verdict(c.passed),
            c.name,
            c.metric,
            c.tolerance,
            c.seconds,
            c.detail
        ));
    }
    let rows = report.criteria.iter().map(|c| {
        vec![c.id.to_string(), format!("\"{}\"", c.name), c.passed.to_string(), float(c.metric), float(c.tolerance), float(c.seconds)]
    });
    let failing: Vec<String> =
        report.criteria.iter().filter(|c| !c.passed).map(|c| format!("criterion {} ({}): {}", c.id, c.name, c.detail)).collect();
    let all_passed = report.all_passed;
    let out = Outcome {
        text,
        ..Outcome::new(document("suite", &report), csv(&["id", "name", "passed", "metric", "tolerance", "seconds"], rows))
    };
    out.verdict(all_passed, || failing.join("; "))
}

/// Plain `key: value` lines from a document; nested values stay compact.
fn text_of(doc: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = doc {
        for (k, v) in map {
            let rendered = match v {
                Value::String(s) => s.clone(),
                Value::Array(items) if items.iter().all(|x| x.is_number()) => {
                    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                }
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {rendered}\n"));
        }
    }
    out
}
