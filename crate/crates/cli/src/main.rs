mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coulomb_shift::algebra::VariableSpace;
use coulomb_shift::coulomb::{
    coproduct, factor_through, format_witness, largest_subspace_check, membership, poisson_bracket, DiffOp,
};
use coulomb_shift::gauge::{GaugeTheory, HbarConvention};
use coulomb_shift::parse::{parse_diffop, parse_int_vector, parse_novikov};
use coulomb_shift::peterson::{matter_peterson, one_based, peterson_data, Sign};
use coulomb_shift::roots::RootDatum;
use coulomb_shift::shift::{
    assemble_raw, assemble_shift, module_check, noneq_limit, seidel_image, seidel_linear_rep, seidel_localized,
    shift_s, shift_s_untwisted, EntryFile, FixedPointModel, LocalizedClass, NovikovMap, OperatorTable,
};
use coulomb_shift::{batch, Error};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "coulomb", version, about = "Exact Coulomb branch, Peterson and shift-operator computations")]
struct Cli {
    /// Emit one JSON document instead of aligned text.
    #[arg(long, global = true)]
    json: bool,
    /// Loop-rotation convention for Euler classes.
    #[arg(long, global = true, default_value = "shift1")]
    convention: HbarConvention,
    /// Seed recorded in the output header.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for batch inputs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gauge theory data.
    #[command(subcommand)]
    Gauge(GaugeCmd),
    /// Abelian Coulomb branch algebra.
    #[command(subcommand)]
    Coulomb(CoulombCmd),
    /// Peterson class of a cocharacter on G/P.
    Peterson(PetersonArgs),
    /// Shift operators from fixed-point data.
    #[command(subcommand)]
    Shift(ShiftCmd),
    /// Abelian Seidel homomorphism for X = N.
    Seidel(SeidelArgs),
}

#[derive(Args, Debug)]
struct TheoryArg {
    #[arg(long)]
    theory: PathBuf,
}

#[derive(Subcommand, Debug)]
enum GaugeCmd {
    /// Rank, matter weights and flavour charges.
    Info(TheoryArg),
    /// Whether no two weights are negative multiples of each other.
    Gluable(TheoryArg),
}

#[derive(Subcommand, Debug)]
enum CoulombCmd {
    /// Membership in the Coulomb branch algebra, with a witness.
    Member {
        #[command(flatten)]
        theory: TheoryArg,
        #[arg(required = true, allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Twisted product.
    Mult {
        #[command(flatten)]
        theory: TheoryArg,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Poisson bracket of h-free representatives.
    Poisson {
        #[command(flatten)]
        theory: TheoryArg,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Coproduct for the splitting N = N1 + N2.
    Coprod {
        #[command(flatten)]
        theory: TheoryArg,
        /// Matter indices (1-based) forming N1.
        #[arg(long)]
        split: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Largest-subspace criterion with a dilation flavour.
    GlueCheck {
        #[command(flatten)]
        theory: TheoryArg,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Positive,
    Negative,
}

#[derive(Args, Debug)]
struct PetersonArgs {
    #[arg(long)]
    root: PathBuf,
    /// Simple roots (1-based) generating the Levi of P.
    #[arg(long, default_value = "[]")]
    parabolic: String,
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Matter theory for the shifted variant.
    #[arg(long, requires = "rho")]
    theory: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    #[arg(long, value_enum, default_value = "positive")]
    sign: SignArg,
}

#[derive(Subcommand, Debug)]
enum ShiftCmd {
    /// S_lambda applied to a class (default the unit).
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        untwisted: bool,
    },
    /// S_{lambda+mu} = S_lambda S_mu on the unit and divisor classes.
    ModuleCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// sum c_mu S_mu(1) from an operator table.
    Assemble {
        #[arg(long)]
        table: PathBuf,
        /// Keep the exponents in the table's own curve lattice.
        #[arg(long)]
        no_push: bool,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Non-equivariant limit of a class file or of an assembled expression.
    Limit {
        #[arg(long, conflicts_with = "table")]
        class: Option<PathBuf>,
        #[arg(long, requires = "expr")]
        table: Option<PathBuf>,
        #[arg(long)]
        no_push: bool,
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
}

#[derive(Args, Debug)]
struct SeidelArgs {
    #[command(flatten)]
    theory: TheoryArg,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "expr")]
    lambda: Option<String>,
    #[arg(allow_hyphen_values = true)]
    expr: Option<String>,
}

/// A localized class on its own: `{"rank", "aux", "curve_rank", "class"}`.
#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassFile {
    rank: usize,
    #[serde(default)]
    aux: Vec<String>,
    curve_rank: usize,
    class: EntryFile,
}

enum Failure {
    Negative(Report),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoNonEquivariantLimit(_)
            | Error::Undetermined(_)
            | Error::NotCentral(_)
            | Error::SignHypothesis(_) => {
                let mut r = Report::default();
                r.put("result", false).put("reason", e.to_string());
                Failure::Negative(r)
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_theory(arg: &TheoryArg) -> Result<GaugeTheory, Failure> {
    Ok(GaugeTheory::from_json(&read(&arg.theory)?)?)
}

fn negative(mut r: Report, reason: String) -> Outcome {
    r.put("result", false).put("reason", reason);
    Err(Failure::Negative(r))
}

fn gauge(cli: &Cli, cmd: &GaugeCmd) -> Outcome {
    let mut r = Report::new(cli.seed);
    match cmd {
        GaugeCmd::Info(t) => {
            let theory = load_theory(t)?;
            r.put("rank", theory.rank())
                .put("matter", json!(theory.matter()))
                .put("flavour_rank", theory.flavour_rank());
            if theory.flavour_rank() > 0 {
                r.put("charges", json!(theory.charges()));
            }
            r.put("gluable", theory.is_gluable());
            Ok(r)
        }
        GaugeCmd::Gluable(t) => {
            let theory = load_theory(t)?;
            if theory.is_gluable() {
                r.put("result", true);
                Ok(r)
            } else {
                negative(r, "some weight is a negative multiple of another".into())
            }
        }
    }
}

fn theory_expr(theory: &GaugeTheory, text: &str) -> Result<(Arc<VariableSpace>, DiffOp), Failure> {
    let space = theory.space(&[]);
    let x = parse_diffop(text, &space)?;
    Ok((space, x))
}

fn coulomb(cli: &Cli, cmd: &CoulombCmd) -> Outcome {
    let conv = cli.convention;
    let mut r = Report::new(cli.seed);
    r.put("convention", conv.to_string());
    match cmd {
        CoulombCmd::Member { theory, exprs } => {
            let theory = load_theory(theory)?;
            let space = theory.space(&[]);
            let parsed = exprs
                .iter()
                .map(|e| parse_diffop(e, &space))
                .collect::<Result<Vec<_>, _>>()?;
            let results = batch::map(&parsed, |x| {
                membership(x, &theory, conv).and_then(|w| match w {
                    Some(w) => format_witness(&w, &theory, conv).map(Some),
                    None => Ok(None),
                })
            });
            let mut all = true;
            let mut rows = Vec::new();
            for (text, res) in exprs.iter().zip(results) {
                match res? {
                    Some(w) => rows.push(json!({"expr": text, "member": true, "witness": w})),
                    None => {
                        all = false;
                        rows.push(json!({"expr": text, "member": false}));
                    }
                }
            }
            if rows.len() == 1 {
                let row = rows.pop().expect("one row");
                r.put("member", row["member"].clone());
                if let Some(w) = row.get("witness") {
                    r.put("witness", w.clone());
                }
            } else {
                r.put("results", Value::Array(rows));
            }
            if all {
                Ok(r)
            } else {
                negative(r, "a coefficient is not divisible by the Euler class of its fibre".into())
            }
        }
        CoulombCmd::Mult { theory, x, y } => {
            let theory = load_theory(theory)?;
            let (space, x) = theory_expr(&theory, x)?;
            let y = parse_diffop(y, &space)?;
            r.put("product", x.twisted_product(&y)?.to_string());
            Ok(r)
        }
        CoulombCmd::Poisson { theory, x, y } => {
            let theory = load_theory(theory)?;
            let (space, x) = theory_expr(&theory, x)?;
            let y = parse_diffop(y, &space)?;
            r.put("bracket", poisson_bracket(&x, &y)?.to_string());
            Ok(r)
        }
        CoulombCmd::Coprod { theory, split, expr } => {
            let theory = load_theory(theory)?;
            let (_, x) = theory_expr(&theory, expr)?;
            let first = parse_int_vector(split)?;
            let n = theory.matter().len();
            let mut left = Vec::new();
            for i in &first {
                if *i < 1 || *i as usize > n {
                    return Err(Failure::Usage(format!("split index {i} outside 1..={n}")));
                }
                left.push(*i as usize - 1);
            }
            let right: Vec<usize> = (0..n).filter(|i| !left.contains(i)).collect();
            let n1 = theory.sub_theory(&left)?;
            let n2 = theory.sub_theory(&right)?;
            let t = coproduct(&x, &theory, &n1, &n2)?;
            r.put("coproduct", t.to_string());
            match factor_through(&t, &n1, &n2, conv)? {
                Some(_) => {
                    r.put("factors", true);
                    Ok(r)
                }
                None => {
                    r.put("factors", false);
                    negative(r, "the coproduct does not lie in the span of the two factor algebras".into())
                }
            }
        }
        CoulombCmd::GlueCheck { theory, expr } => {
            let theory = load_theory(theory)?;
            let (_, x) = theory_expr(&theory, expr)?;
            if largest_subspace_check(&x, &theory, conv)? {
                r.put("result", true);
                Ok(r)
            } else {
                negative(r, "the dilation-flavoured Seidel image is not polynomial".into())
            }
        }
    }
}

fn peterson(cli: &Cli, a: &PetersonArgs) -> Outcome {
    let datum = RootDatum::from_json(&read(&a.root)?)?;
    let subset: Vec<usize> = parse_int_vector(&a.parabolic)?
        .into_iter()
        .map(|i| {
            if i < 1 || i as usize > datum.semisimple_rank() {
                Err(Failure::Usage(format!("simple root index {i} out of range")))
            } else {
                Ok(i as usize - 1)
            }
        })
        .collect::<Result<_, _>>()?;
    let p = datum.parabolic(&subset)?;
    let lambda = parse_int_vector(&a.lambda)?;
    let mut r = Report::new(cli.seed);
    let (target, shift) = match (&a.theory, &a.rho) {
        (Some(t), Some(rho)) => {
            let theory = GaugeTheory::from_json(&read(t)?)?;
            let rho = parse_int_vector(rho)?;
            let sign = match a.sign {
                SignArg::Positive => Sign::Positive,
                SignArg::Negative => Sign::Negative,
            };
            let (n, _) = matter_peterson(&datum, &lambda, &p, &theory, &rho, sign)?;
            let step = match sign {
                Sign::Positive => -(n as i64),
                Sign::Negative => n as i64,
            };
            let shifted: Vec<i64> = lambda.iter().zip(&rho).map(|(l, x)| l + step * x).collect();
            (shifted, Some(n))
        }
        _ => (lambda, None),
    };
    let d = peterson_data(&datum, &target, &p)?;
    r.put("allowed", d.allowed);
    if let Some(n) = shift {
        r.put("shift", n).put("shifted", json!(target));
    }
    r.put("antidominant", json!(d.antidominant));
    if d.allowed {
        r.put("novikov", json!(d.novikov))
            .put("schubert_word", json!(one_based(&datum.element(d.schubert).word)));
        Ok(r)
    } else {
        r.put("novikov", Value::Null).put("schubert_word", Value::Null);
        negative(r, "cocharacter is not P-allowed".into())
    }
}

fn class_lines(c: &LocalizedClass) -> Value {
    json!(c.components().iter().map(|v| v.to_string()).collect::<Vec<_>>())
}

fn load_table(path: &Path) -> Result<OperatorTable, Failure> {
    Ok(OperatorTable::from_json(&read(path)?)?)
}

fn assemble(table: &OperatorTable, expr: &str, no_push: bool) -> Result<LocalizedClass, Failure> {
    let gamma = parse_diffop(expr, table.space())?;
    if no_push {
        return Ok(match assemble_raw(&gamma, table)? {
            Some(c) => c,
            None => assemble_shift(&gamma, table, &NovikovMap::identity(table.curve_rank()))?,
        });
    }
    let identity = NovikovMap::identity(table.curve_rank());
    let map = table.novikov_map().unwrap_or(&identity);
    Ok(assemble_shift(&gamma, table, map)?)
}

fn shift(cli: &Cli, cmd: &ShiftCmd) -> Outcome {
    let mut r = Report::new(cli.seed);
    match cmd {
        ShiftCmd::Eval {
            model,
            lambda,
            class,
            untwisted,
        } => {
            let model = FixedPointModel::from_json(&read(model)?)?;
            let lambda = parse_int_vector(lambda)?;
            let alpha = match class {
                Some(text) => LocalizedClass::global(parse_novikov(text, model.space(), model.curve_rank())?),
                None => model.unit(),
            };
            let out = if *untwisted {
                shift_s_untwisted(&model, &lambda, &alpha)?
            } else {
                shift_s(&model, &lambda, &alpha)?
            };
            r.put("points", class_lines(&out));
            Ok(r)
        }
        ShiftCmd::ModuleCheck { model, lambda, mu } => {
            let model = FixedPointModel::from_json(&read(model)?)?;
            let lambda = parse_int_vector(lambda)?;
            let mu = parse_int_vector(mu)?;
            if module_check(&model, &lambda, &mu)? {
                r.put("result", true);
                Ok(r)
            } else {
                negative(r, "S_{lambda+mu} differs from S_lambda S_mu".into())
            }
        }
        ShiftCmd::Assemble { table, no_push, expr } => {
            let table = load_table(table)?;
            let out = assemble(&table, expr, *no_push)?;
            r.put("class", class_lines(&out));
            Ok(r)
        }
        ShiftCmd::Limit {
            class,
            table,
            no_push,
            expr,
        } => {
            let value = match (class, table, expr) {
                (Some(path), _, _) => {
                    let file: ClassFile = serde_json::from_str(&read(path)?)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let aux: Vec<&str> = file.aux.iter().map(String::as_str).collect();
                    let space = VariableSpace::standard(file.rank, 0, &aux)?;
                    match &file.class {
                        EntryFile::Global(t) => LocalizedClass::global(parse_novikov(t, &space, file.curve_rank)?),
                        EntryFile::FixedPoints(ts) => LocalizedClass::fixed_points(
                            ts.iter()
                                .map(|t| parse_novikov(t, &space, file.curve_rank))
                                .collect::<Result<_, _>>()?,
                        )?,
                    }
                }
                (None, Some(path), Some(e)) => assemble(&load_table(path)?, e, *no_push)?,
                _ => return Err(Failure::Usage("give --class FILE or --table FILE with an expression".into())),
            };
            r.put("limit", class_lines(&noneq_limit(&value)?));
            Ok(r)
        }
    }
}

fn seidel(cli: &Cli, a: &SeidelArgs) -> Outcome {
    let theory = load_theory(&a.theory)?;
    let space = theory.space(&[]);
    let mut r = Report::new(cli.seed);
    match (&a.lambda, &a.expr) {
        (Some(l), None) => {
            let lambda = parse_int_vector(l)?;
            let (n, p) = seidel_linear_rep(&theory, &lambda, &space)?;
            r.put("novikov", json!(n))
                .put("linear", p.to_string())
                .put("localized", seidel_localized(&theory, &lambda, &space)?.to_string());
        }
        (None, Some(e)) => {
            let x = parse_diffop(e, &space)?;
            r.put("image", seidel_image(&x, &theory)?.to_string());
        }
        _ => return Err(Failure::Usage("give --lambda or an expression".into())),
    }
    Ok(r)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gauge(c) => gauge(cli, c),
        Command::Coulomb(c) => coulomb(cli, c),
        Command::Peterson(a) => peterson(cli, a),
        Command::Shift(c) => shift(cli, c),
        Command::Seidel(a) => seidel(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        batch::set_jobs(j.max(1));
    }
    match run(&cli) {
        Ok(r) => {
            println!("{}", r.render(cli.json));
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(mut r)) => {
            if let Some(s) = cli.seed {
                if !r.has("seed") {
                    let mut with_seed = Report::new(Some(s));
                    with_seed.extend(r);
                    r = with_seed;
                }
            }
            println!("{}", r.render(cli.json));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            if cli.json {
                println!("{}", json!({"error": msg}));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
