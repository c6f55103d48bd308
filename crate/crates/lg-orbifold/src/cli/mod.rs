//! Command-line front end. Exit codes: 0 success, 1 a mathematical check
//! failed, 2 bad input.

mod render;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lg_orbifold::ainfty_formal::{verify_ainfty, Grading};
use lg_orbifold::exact_algebra::rational::{fmt_rational, parse_rational};
use lg_orbifold::exact_algebra::{Polynomial, Rational};
use lg_orbifold::lg_core::{
    bh_transpose, check_nondegenerate, classify_type, dual_group, invertible_matrix, max_symmetry_group,
    monodromy_element, weight_system, GroupElement, Subgroup,
};
use lg_orbifold::mf_restrict::{
    check_mf, cone_endofunctor, pushforward_mf, restrict_mf, signed_permutation_similarity, split_potential,
    MatrixFactorization, MfFile,
};
use lg_orbifold::popsicle_moduli::{
    admissible_cuts, codimension, enumerate_tree_models, glue, gluing_parameters, validate, Flavor, GlueParam,
    TreeModel,
};
use lg_orbifold::reeb_sectors::{
    check_shift_inequality, enumerate_sectors, invariants, principal_orbit, vanishing_certificate, LgContext,
    SectorError, TwistedSector,
};

#[derive(Parser)]
#[command(name = "lg-orbifold", version, about = "Exact invariants of Landau-Ginzburg orbifolds")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weight system (w; h) of a weighted homogeneous polynomial.
    Weights { w: String },
    /// Log Fano / Calabi-Yau / general type and the nondegeneracy checks.
    Classify { w: String },
    /// Maximal diagonal symmetry group G_W.
    Symmetry {
        w: String,
        /// Also list the elements (capped at 2^16).
        #[arg(long)]
        elements: bool,
    },
    /// Berglund-Hübsch transpose.
    Transpose { w: String },
    /// Dual group of G ⊆ G_W inside G_{W^T}.
    DualGroup {
        w: String,
        /// Generators of G as phase vectors, e.g. "1/2,0;0,1/2". Defaults to <J>.
        #[arg(long)]
        gens: Option<String>,
    },
    /// Nonempty twisted sectors Σ_{g,l} with l ≤ l_max and their indices.
    Sectors {
        w: String,
        #[arg(long, default_value = "1")]
        lmax: String,
    },
    /// One sector Σ_{g,l}.
    Index {
        w: String,
        /// Phases of g, e.g. "0,1/2".
        #[arg(long)]
        g: String,
        #[arg(long)]
        l: String,
    },
    /// The principal orbit Γ_W = Σ_{J^-1,1}.
    Principal { w: String },
    /// Arithmetic certificate that sphere bubbles with N ≥ 2 sprinkles vanish.
    Vanishing {
        w: String,
        #[arg(long, default_value_t = 50)]
        nmax: u64,
        #[arg(long, default_value = "1/100")]
        eps: String,
    },
    /// Tree models of the popsicle compactification up to a codimension.
    Strata {
        #[arg(long)]
        n: usize,
        /// Non-decreasing flavor values, e.g. "1,2"; empty for no sprinkles.
        #[arg(long, default_value = "")]
        flavor: String,
        #[arg(long, default_value_t = 1)]
        max_codim: usize,
        /// Only print counts per codimension.
        #[arg(long)]
        counts: bool,
    },
    /// Admissible cuts of F ⊆ {1..n}.
    Cuts {
        #[arg(long)]
        n: usize,
        #[arg(long = "F", default_value = "")]
        f: String,
    },
    /// Gluing parameters of a model, or the model after one gluing.
    Glue {
        /// Model as JSON text or a path to a JSON file.
        #[arg(long)]
        model: String,
        #[arg(long)]
        param: Option<String>,
    },
    /// Expand the A∞-identity for ε-decorated inputs and check it against the cut relations.
    VerifyAinfty {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        eps_slots: String,
        #[arg(long, default_value = "0")]
        deg_gamma: String,
        /// ℤ/2 degree of Γ, required when deg Γ is not an integer.
        #[arg(long)]
        gamma_parity: Option<u8>,
        /// Input degrees for the degree audit, e.g. "1,1/2,0"; parities default to 0 for fractions.
        #[arg(long)]
        degrees: Option<String>,
    },
    /// Matrix factorization operations.
    Mf {
        #[command(subcommand)]
        op: MfCmd,
    },
}

#[derive(Args)]
struct SplitArgs {
    /// The distinguished variable x_n.
    #[arg(long)]
    var: String,
    /// The graph polynomial f, free of x_n.
    #[arg(long, default_value = "0")]
    f: String,
}

#[derive(Subcommand)]
enum MfCmd {
    /// Verify A·B = B·A = W·Id.
    Check { file: PathBuf },
    /// Substitute x_n = f.
    Restrict {
        file: PathBuf,
        #[command(flatten)]
        split: SplitArgs,
    },
    /// Tensor with the Koszul factor (x_n − f, U₂). The file holds an MF of V.
    Pushforward {
        file: PathBuf,
        /// U = U₁ + x_n·U₂.
        #[arg(long)]
        potential: String,
        #[command(flatten)]
        split: SplitArgs,
    },
    /// Cone of x_n − f on an MF of U.
    Cone {
        file: PathBuf,
        #[command(flatten)]
        split: SplitArgs,
    },
}

struct Failure(i32, String);

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure(2, e.to_string())
}

type Outcome = Result<(Value, bool), Failure>;

pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = std::env::var("LG_ORBIFOLD_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(&cli.cmd) {
        Ok((value, ok)) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
                Format::Table => render::to_table(&value),
            };
            let written = match &cli.out {
                Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn poly(s: &str) -> Result<Polynomial, Failure> {
    Polynomial::parse(s).map_err(|e| Failure(2, format!("polynomial {s:?}: {e}")))
}

fn rational(flag: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure(2, format!("--{flag}: {e}")))
}

fn index_set(flag: &str, s: &str) -> Result<BTreeSet<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Failure(2, format!("--{flag}: {t:?} is not an index"))))
        .collect()
}

fn element(flag: &str, s: &str) -> Result<GroupElement, Failure> {
    let phases = s.split(',').map(|t| rational(flag, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(GroupElement::new(phases))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn context(w: &str) -> Result<LgContext, Failure> {
    LgContext::new(poly(w)?).map_err(input)
}

fn sector_row(s: &TwistedSector, ctx: &LgContext) -> Result<Value, SectorError> {
    let inv = invariants(s, &ctx.ws)?;
    let shift = check_shift_inequality(s, &ctx.ws)?;
    let mut v = to_value(s);
    let o = v.as_object_mut().expect("object");
    for (k, x) in to_value(&inv).as_object().expect("object") {
        o.insert(k.clone(), x.clone());
    }
    o.insert("shift_bound".into(), json!(fmt_rational(&shift.bound)));
    o.insert("shift_margin".into(), json!(fmt_rational(&shift.margin)));
    o.insert("shift_holds".into(), json!(shift.holds));
    Ok(v)
}

fn subgroup_value(g: &Subgroup) -> Value {
    json!({ "order": g.order(), "generators": to_value(&g.generators), "elements": to_value(&g.elements) })
}

fn dispatch(cmd: &Cmd) -> Outcome {
    match cmd {
        Cmd::Weights { w } => {
            let ws = weight_system(&poly(w)?).map_err(input)?;
            Ok((to_value(&ws), true))
        }
        Cmd::Classify { w } => {
            let p = poly(w)?;
            let ws = weight_system(&p).map_err(input)?;
            let report = check_nondegenerate(&p);
            let ok = report.passes;
            Ok((
                json!({ "weights": to_value(&ws), "class": to_value(&classify_type(&ws)), "nondegenerate": to_value(&report) }),
                ok,
            ))
        }
        Cmd::Symmetry { w, elements } => {
            let p = poly(w)?;
            let g = max_symmetry_group(&p).map_err(input)?;
            let mut v = json!({
                "order": g.order.to_string(),
                "invariant_factors": g.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "cyclic": g.is_cyclic(),
                "generators": to_value(&g.generators),
            });
            if let Ok(ws) = weight_system(&p) {
                let j = monodromy_element(&ws);
                v["J"] = to_value(&j);
                v["contains_J"] = json!(g.contains(&j));
            }
            if *elements {
                v["elements"] = to_value(&g.elements().map_err(input)?);
            }
            Ok((v, true))
        }
        Cmd::Transpose { w } => {
            let p = poly(w)?;
            let a = invertible_matrix(&p).map_err(input)?;
            let t = bh_transpose(&p).map_err(input)?;
            let rows = |m: &lg_orbifold::exact_algebra::IntMatrix| -> Vec<Vec<String>> {
                m.rows_vec().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
            };
            Ok((
                json!({ "transpose": t.to_string(), "matrix": rows(&a), "transpose_matrix": rows(&a.transpose()) }),
                true,
            ))
        }
        Cmd::DualGroup { w, gens } => {
            let p = poly(w)?;
            let n = p.nvars();
            let gens = match gens {
                Some(s) => s.split(';').map(|e| element("gens", e)).collect::<Result<Vec<_>, _>>()?,
                None => vec![monodromy_element(&weight_system(&p).map_err(input)?)],
            };
            if gens.iter().any(|g| g.n() != n) {
                return Err(Failure(2, format!("--gens: each element needs {n} phases")));
            }
            let g = Subgroup::generated_by(n, &gens).map_err(input)?;
            let d = dual_group(&g, &p).map_err(input)?;
            let t = bh_transpose(&p).map_err(input)?;
            Ok((json!({ "group": subgroup_value(&g), "transpose": t.to_string(), "dual": subgroup_value(&d) }), true))
        }
        Cmd::Sectors { w, lmax } => {
            let ctx = context(w)?;
            let l = rational("lmax", lmax)?;
            let sectors = enumerate_sectors(&ctx, &l).map_err(input)?;
            let rows = sectors.iter().map(|s| sector_row(s, &ctx)).collect::<Result<Vec<_>, _>>().map_err(input)?;
            let ok = rows.iter().all(|r| r["shift_holds"] == json!(true));
            Ok((json!({ "weights": to_value(&ctx.ws), "count": rows.len(), "sectors": rows }), ok))
        }
        Cmd::Index { w, g, l } => {
            let ctx = context(w)?;
            let g = element("g", g)?;
            if g.n() != ctx.n() {
                return Err(Failure(2, format!("--g: expected {} phases", ctx.n())));
            }
            let s = ctx.sector(&g, &rational("l", l)?).map_err(input)?;
            if !s.nonempty {
                return Ok((json!({ "sector": to_value(&s), "nonempty": false }), true));
            }
            let row = sector_row(&s, &ctx).map_err(input)?;
            let ok = row["shift_holds"] == json!(true);
            Ok((row, ok))
        }
        Cmd::Principal { w } => {
            let ctx = context(w)?;
            let s = principal_orbit(&ctx).map_err(input)?;
            let inv = invariants(&s, &ctx.ws).map_err(input)?;
            Ok((
                json!({
                    "weights": to_value(&ctx.ws),
                    "class": to_value(&classify_type(&ctx.ws)),
                    "mu_rs": fmt_rational(&inv.mu_rs),
                    "sector": to_value(&s),
                    "invariants": to_value(&inv),
                }),
                true,
            ))
        }
        Cmd::Vanishing { w, nmax, eps } => {
            let ctx = context(w)?;
            let eps = rational("eps", eps)?;
            match vanishing_certificate(&ctx, *nmax, &eps) {
                Ok(r) => {
                    let ok = r.passes;
                    let mut v = to_value(&r);
                    v["applicable"] = json!(true);
                    Ok((v, ok))
                }
                Err(SectorError::NotApplicable(mu)) => {
                    Ok((json!({ "applicable": false, "mu": mu, "reason": "mu <= -1/2" }), true))
                }
                Err(e) => Err(input(e)),
            }
        }
        Cmd::Strata { n, flavor, max_codim, counts } => {
            let fl = Flavor::parse(*n, flavor).map_err(input)?;
            let models = enumerate_tree_models(&fl, *max_codim).map_err(input)?;
            let mut by_codim = vec![0usize; max_codim + 1];
            let mut rows = Vec::new();
            for m in &models {
                let c = codimension(m).map_err(input)?;
                by_codim[c] += 1;
                if !counts {
                    rows.push(json!({ "codim": c, "model": to_value(m) }));
                }
            }
            let mut v = json!({ "n": n, "flavor": fl.phi, "max_codim": max_codim, "total": models.len(), "counts_by_codim": by_codim });
            if !counts {
                v["models"] = Value::Array(rows);
            }
            Ok((v, true))
        }
        Cmd::Cuts { n, f } => {
            let f = index_set("F", f)?;
            if f.iter().any(|&k| k == 0 || k > *n) {
                return Err(Failure(2, format!("--F: entries must lie in 1..={n}")));
            }
            let cuts = admissible_cuts(*n, &f);
            Ok((json!({ "n": n, "F": f, "count": cuts.len(), "cuts": to_value(&cuts) }), true))
        }
        Cmd::Glue { model, param } => {
            let text = if model.trim_start().starts_with('{') {
                model.clone()
            } else {
                std::fs::read_to_string(model).map_err(|e| Failure(2, format!("--model: {e}")))?
            };
            let m: TreeModel = serde_json::from_str(&text).map_err(|e| Failure(2, format!("--model: {e}")))?;
            let report = validate(&m);
            if !report.valid {
                return Err(Failure(2, format!("--model: {}", report.violation.unwrap_or_default())));
            }
            let codim = codimension(&m).map_err(input)?;
            match param {
                None => {
                    let ps: Vec<String> = gluing_parameters(&m).iter().map(|p| p.to_string()).collect();
                    Ok((json!({ "codim": codim, "parameters": ps }), true))
                }
                Some(p) => {
                    let p: GlueParam = p.parse().map_err(|e| Failure(2, format!("--param: {e}")))?;
                    let g = glue(&m, p).map_err(|e| Failure(1, e.to_string()))?;
                    let gc = codimension(&g).map_err(input)?;
                    Ok((
                        json!({ "codim": codim, "param": p.to_string(), "glued_codim": gc, "glued": to_value(&g) }),
                        gc + 1 == codim,
                    ))
                }
            }
        }
        Cmd::VerifyAinfty { n, eps_slots, deg_gamma, gamma_parity, degrees } => {
            let e = index_set("eps-slots", eps_slots)?;
            let gamma = grading("deg-gamma", deg_gamma, *gamma_parity)?;
            let degs = match degrees {
                Some(s) => Some(s.split(',').map(|t| grading("degrees", t, None)).collect::<Result<Vec<_>, _>>()?),
                None => None,
            };
            let r = verify_ainfty(*n, &e, &gamma, degs.as_deref()).map_err(input)?;
            let ok = r.passes;
            Ok((to_value(&r), ok))
        }
        Cmd::Mf { op } => mf(op),
    }
}

fn grading(flag: &str, s: &str, parity: Option<u8>) -> Result<Grading, Failure> {
    let q = rational(flag, s)?;
    match (Grading::integral(q.clone()), parity) {
        (Some(g), None) => Ok(g),
        (_, Some(p)) => Grading::new(q, p).map_err(|e| Failure(2, format!("--{flag}: {e}"))),
        (None, None) => Grading::new(q, 0).map_err(input),
    }
}

fn read_mf(path: &PathBuf) -> Result<MatrixFactorization, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
    let f: MfFile = serde_json::from_str(&text).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
    MatrixFactorization::from_file(&f).map_err(input)
}

fn mf_value(m: &MatrixFactorization) -> Result<Value, Failure> {
    let valid = check_mf(m).map_err(input)?;
    Ok(json!({ "rank": m.rank(), "valid": valid, "factorization": to_value(&m.to_file()) }))
}

/// f and, when given, U over the union of their variables and the file's.
fn ring(m: &MatrixFactorization, extra: &[&str]) -> Result<(MatrixFactorization, Vec<Polynomial>), Failure> {
    let mut texts: Vec<String> = m.vars().iter().map(|v| format!("0*{v}")).collect();
    texts.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let ps = Polynomial::parse_common(&refs).map_err(input)?;
    let vars = ps[0].vars().to_vec();
    let skip = m.vars().len();
    let m = m.with_vars(&vars).map_err(input)?;
    Ok((m, ps[skip..].to_vec()))
}

fn mf(op: &MfCmd) -> Outcome {
    match op {
        MfCmd::Check { file } => {
            let m = read_mf(file)?;
            let v = mf_value(&m)?;
            let ok = v["valid"] == json!(true);
            Ok((v, ok))
        }
        MfCmd::Restrict { file, split } => {
            let (m, ps) = ring(&read_mf(file)?, &[&split.f])?;
            let r = restrict_mf(&m, &split.var, &ps[0]).map_err(input)?;
            let v = mf_value(&r)?;
            let ok = v["valid"] == json!(true);
            Ok((v, ok))
        }
        MfCmd::Pushforward { file, potential, split } => {
            let (n, ps) = ring(&read_mf(file)?, &[&split.f, potential])?;
            let s = split_potential(&ps[1], &split.var, &ps[0]).map_err(input)?;
            let p = pushforward_mf(&n, &s).map_err(input)?;
            let v = mf_value(&p)?;
            let ok = v["valid"] == json!(true);
            Ok((v, ok))
        }
        MfCmd::Cone { file, split } => {
            let (m, ps) = ring(&read_mf(file)?, &[&split.f])?;
            let s = split_potential(&m.potential, &split.var, &ps[0]).map_err(input)?;
            let c = cone_endofunctor(&m, &s).map_err(input)?;
            let mut v = mf_value(&c)?;
            let ok = v["valid"] == json!(true);
            // compare with i_* i^* M presentation when the search is feasible
            if c.rank() <= lg_orbifold::mf_restrict::functors::SIMILARITY_MAX_RANK {
                let r = restrict_mf(&m, &split.var, &ps[0]).map_err(input)?;
                let pf = pushforward_mf(&r, &s).map_err(input)?;
                let sim = signed_permutation_similarity(&c, &pf).map_err(input)?;
                v["signed_permutation_similar_to_pushforward_of_restriction"] = json!(sim.is_some());
            }
            Ok((v, ok))
        }
    }
}
