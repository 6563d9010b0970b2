use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pcurv_core::connection::{pcurvature_matrix, NormalizedConnection};
use pcurv_core::curve::{Curve, Sym, U0, U1, U2};
use pcurv_core::detpsi::{det_psi, leading_term_certificate};
use pcurv_core::hurwitz::{closed_form, total_count};
use pcurv_core::nc_expand::pcurvature_formula;
use pcurv_core::prank::{classify_prank, h_vector, hasse_witt_prank, strata};
use pcurv_core::solve_count::count;
use pcurv_core::verify::{run, Suite};
use pcurv_core::{Error, FieldElem, PrimeField, UPoly};

#[derive(Parser)]
#[command(name = "pcurv", version, about = "p-curvature of connections on genus-2 curves y^2 = g(x)")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct PArg {
    /// Odd prime characteristic.
    #[arg(long)]
    p: u64,
}

#[derive(Args)]
struct CurveArg {
    /// Coefficients a1,..,a5 of y^2 = x^5 + a1 x^4 + ... + a5, reduced mod p.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    curve: Option<Vec<i64>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Noncommutative p-curvature formula.
    Formula(PArg),
    /// f_{theta^p}, symbolic or for one curve.
    Ftheta {
        #[command(flatten)]
        p: PArg,
        #[command(flatten)]
        curve: CurveArg,
    },
    /// p-rank of one curve, with the Hasse-Witt rank alongside.
    Prank {
        #[command(flatten)]
        p: PArg,
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Symbolic p-rank stratum conditions.
    PrankStrata(PArg),
    /// Entries of the p-curvature matrix of the normalized connection.
    Pcmatrix {
        #[command(flatten)]
        p: PArg,
        #[command(flatten)]
        curve: CurveArg,
        /// Connection parameters u0,u1,u2 (requires --curve).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Option<Vec<i64>>,
    },
    /// Connections with vanishing p-curvature on one curve, p in {3, 5, 7}.
    Count {
        #[command(flatten)]
        p: PArg,
        #[command(flatten)]
        curve: CurveArg,
        /// Also report the count times 16, one for each theta characteristic.
        #[arg(long)]
        total: bool,
        /// Include every solution.
        #[arg(long)]
        solutions: bool,
    },
    /// Coefficients of det of the p-curvature, p in {3, 5, 7}.
    Detpsi {
        #[command(flatten)]
        p: PArg,
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Total ramified-map count and (p^3 - p)/24.
    Hurwitz(PArg),
    /// Run the self-check suites.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Golden,
    Properties,
    All,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PositiveDimensional | Error::SupportViolation(_) | Error::ZeroInverse | Error::ZeroPolynomial => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, ok: true }
    }
}

fn parse_curve(p: u64, c: &CurveArg) -> Result<Option<Curve<FieldElem>>, Failure> {
    match &c.curve {
        None => Ok(None),
        Some(v) => {
            let a: [i64; 5] = v
                .as_slice()
                .try_into()
                .map_err(|_| Failure::Usage(format!("--curve needs 5 coefficients, got {}", v.len())))?;
            Ok(Some(Curve::from_ints(p, &a)?))
        }
    }
}

fn need_curve(p: u64, c: &CurveArg) -> Result<Curve<FieldElem>, Failure> {
    parse_curve(p, c)?.ok_or_else(|| Failure::Usage("--curve is required".into()))
}

fn symbolic_curve(p: u64, c: &CurveArg) -> Result<Curve<Sym>, Failure> {
    Ok(match parse_curve(p, c)? {
        Some(c) => c.to_symbolic(),
        None => Curve::symbolic(p)?,
    })
}

fn xpoly_json(f: &UPoly<Sym>) -> Value {
    let terms: Vec<Value> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| json!({"x_degree": d, "coeff": c.to_json()}))
        .collect();
    json!({"text": f.fmt_var("x"), "terms": terms})
}

fn exec(cmd: &Cmd) -> Result<Output, Failure> {
    match cmd {
        Cmd::Formula(PArg { p }) => {
            let f = pcurvature_formula(*p)?;
            Ok(Output::new(f.to_json(), f.to_text()))
        }
        Cmd::Ftheta { p, curve } => {
            let c = symbolic_curve(p.p, curve)?;
            let f = c.f_theta_p();
            Ok(Output::new(json!({"p": p.p, "f_theta_p": xpoly_json(&f)}), f.fmt_var("x")))
        }
        Cmd::Prank { p, curve } => {
            let c = need_curve(p.p, curve)?;
            let h = h_vector(&c);
            let r = classify_prank(&h);
            let oracle = hasse_witt_prank(&c)?;
            let hv = [&h.h1, &h.h2, &h.h3, &h.h4].map(|e| e.value());
            let json = json!({"prank": r.0, "h": hv, "oracle": oracle.0, "agree": r == oracle});
            let text = format!("p-rank {} (Hasse-Witt {}), h = {:?}", r.0, oracle.0, hv);
            Ok(Output { json, text, ok: r == oracle })
        }
        Cmd::PrankStrata(PArg { p }) => {
            let s = strata(*p)?;
            let json = json!({
                "p": p,
                "rank2": {"text": s.rank2.to_string(), "poly": s.rank2.to_json()},
                "rank1": s.rank1.iter().map(|f| json!({"text": f.to_string(), "poly": f.to_json()})).collect::<Vec<_>>(),
            });
            let text = format!(
                "p-rank 2 iff {} != 0\np-rank >= 1 iff {} != 0 or {} != 0",
                s.rank2, s.rank1[0], s.rank1[1]
            );
            Ok(Output::new(json, text))
        }
        Cmd::Pcmatrix { p, curve, u } => {
            let m = match (parse_curve(p.p, curve)?, u) {
                (Some(c), Some(u)) => {
                    let u: [i64; 3] = u
                        .as_slice()
                        .try_into()
                        .map_err(|_| Failure::Usage(format!("--u needs 3 values, got {}", u.len())))?;
                    let f = PrimeField::new(p.p)?;
                    let conn = NormalizedConnection::new(c, u.map(|v| f.elem(v)));
                    pcurvature_matrix(&conn).to_json()
                }
                (None, Some(_)) => return Err(Failure::Usage("--u requires --curve".into())),
                (Some(c), None) => pcurvature_matrix(&NormalizedConnection::symbolic_u(&c)?).to_json(),
                (None, None) => pcurvature_matrix(&NormalizedConnection::symbolic(p.p)?).to_json(),
            };
            let text = ["h11", "h12", "h21", "h22"]
                .map(|k| format!("{k} = {}", m[k].as_str().unwrap_or_default()))
                .join("\n");
            Ok(Output::new(m, text))
        }
        Cmd::Count { p, curve, total, solutions } => {
            let c = need_curve(p.p, curve)?;
            let r = count(&c)?;
            let mut json = r.to_json(*solutions);
            json["p"] = json!(p.p);
            json["curve"] = json!(c.coeff_values());
            let mut text = format!(
                "e_{} = {} (with multiplicity {}, general value {})",
                p.p,
                r.distinct,
                r.with_multiplicity,
                closed_form(p.p)
            );
            if *total {
                json["total"] = json!(16 * r.distinct);
                text.push_str(&format!("\ntotal over theta characteristics = {}", 16 * r.distinct));
            }
            if *solutions {
                for pt in r.points(&[U0, U1, U2]) {
                    let s: Vec<String> = pt.iter().map(|x| x.to_string()).collect();
                    text.push_str(&format!("\n(u0, u1, u2) = ({})", s.join(", ")));
                }
            }
            Ok(Output::new(json, text))
        }
        Cmd::Detpsi { p, curve } => {
            let conn = match parse_curve(p.p, curve)? {
                Some(c) => NormalizedConnection::symbolic_u(&c)?,
                None => NormalizedConnection::symbolic(p.p)?,
            };
            let map = det_psi(&conn)?;
            let cert = leading_term_certificate(&map);
            let mut json = map.to_json();
            json["support_ok"] = json!(true);
            json["leading_term_certificate"] = json!(cert);
            let text = format!(
                "f1 = {}\nf2 = {}\nf3 = {}\nsupport in x-degrees 0, p, 2p: true\nleading-term certificate: {cert}",
                map.f[0], map.f[1], map.f[2]
            );
            Ok(Output { json, text, ok: cert })
        }
        Cmd::Hurwitz(PArg { p }) => {
            let t = total_count(*p)?;
            let cf = closed_form(*p);
            Ok(Output { json: json!({"total": t, "closed_form": cf}), text: format!("total {t}, closed form {cf}"), ok: t == cf })
        }
        Cmd::Verify { suite, seed } => {
            let s = match suite {
                SuiteArg::Golden => Suite::Golden,
                SuiteArg::Properties => Suite::Properties,
                SuiteArg::All => Suite::All,
            };
            let r = run(s, *seed);
            if let Some(f) = r.first_failure() {
                eprintln!("first failing check: {}", f.name);
            }
            Ok(Output { json: r.to_json(), text: r.to_text().trim_end().to_string(), ok: r.passed() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match exec(&cli.cmd) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
                Format::Text => out.text,
            };
            let _ = writeln!(std::io::stdout(), "{body}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
