//! Acceptance run: one timed check per criterion, one PASS/FAIL line each.
//! Exits nonzero if any criterion fails its check or its time bound.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use coulomb_shift::algebra::{Polynomial, RationalFunction, VariableSpace};
use coulomb_shift::batch;
use coulomb_shift::coulomb::{
    all_splits, basis_element, classical_limit, classical_product, coproduct, directional_derivative, factor_through,
    is_member, largest_subspace_check, poisson_bracket, DiffOp,
};
use coulomb_shift::gauge::{GaugeTheory, HbarConvention};
use coulomb_shift::parse::{parse_diffop, parse_novikov};
use coulomb_shift::peterson::{dim_cell, is_p_allowed, peterson_data, virtual_dimension};
use coulomb_shift::roots::RootDatum;
use coulomb_shift::sample;
use coulomb_shift::shift::{
    assemble_shift, classical_value, module_check, noneq_limit, seidel_linear_rep, shift_of_unit, FixedPointModel,
    LocalizedClass, NovikovMap, OperatorTable,
};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::Rng;

type Outcome = Result<String, String>;
type Pair = (Vec<i64>, Vec<i64>);

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: coulomb_shift::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// All integer vectors of length `n` with entries in `[-b, b]`.
fn box_points(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-b..=b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn multisets(items: &[Vec<i64>], size: usize) -> Vec<Vec<Vec<i64>>> {
    fn go(items: &[Vec<i64>], size: usize, start: usize, cur: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, size, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Theories of rank `r` with between one and `max_n` nonzero weights with
/// entries in `[-b, b]`, one per multiset.
fn theory_grid(r: usize, max_n: usize, b: i64) -> Vec<GaugeTheory> {
    let weights: Vec<Vec<i64>> = box_points(r, b).into_iter().filter(|w| w.iter().any(|x| *x != 0)).collect();
    (1..=max_n)
        .flat_map(|n| multisets(&weights, n))
        .map(|m| GaugeTheory::new(r, m).expect("uniform lengths"))
        .collect()
}

fn gl2_table() -> OperatorTable {
    OperatorTable::from_json(&read("gl2_tp1_table.json")).expect("table fixture")
}

fn global(table: &OperatorTable, text: &str, curve_rank: usize) -> Result<LocalizedClass, String> {
    Ok(LocalizedClass::global(lift(parse_novikov(text, table.space(), curve_rank))?))
}

fn c1() -> Outcome {
    let table = gl2_table();
    let gamma_text = "(a1 - a2)*(z[1,0] - z[0,1])";
    let gamma = lift(parse_diffop(gamma_text, table.space()))?;
    let nm = table.novikov_map().ok_or("fixture has no Novikov map")?.clone();
    let got = lift(assemble_shift(&gamma, &table, &nm))?;
    let want = global(&table, "(q[1,0] - q[0,1])*(2*x + a1 + a2) - (q[1,0] + q[0,1])*h", 2)?;
    ensure(got == want, || format!("library gave {got:?}"))?;

    let out = Command::new(env!("CARGO_BIN_EXE_coulomb"))
        .args(["--json", "shift", "assemble", "--table"])
        .arg(data("gl2_tp1_table.json"))
        .arg(gamma_text)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("cli exit {:?}", out.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let text = v["class"][0].as_str().ok_or("cli output has no class")?;
    let cli = global(&table, text, 2)?;
    ensure(cli == want, || format!("cli gave {text}"))?;
    Ok(format!("Γ ↦ {text}"))
}

fn c2() -> Outcome {
    let table = gl2_table();
    let space = table.space().clone();
    let nm = table.novikov_map().ok_or("fixture has no Novikov map")?.clone();
    let id = NovikovMap::identity(4);
    let limit = |gamma: &str, map: &NovikovMap| -> Result<LocalizedClass, String> {
        let g = lift(parse_diffop(gamma, &space))?;
        lift(noneq_limit(&lift(assemble_shift(&g, &table, map))?))
    };
    let cases = [
        ("(a1 - a2)^2*z[1,0]", "(q[1,0,0,0] - q[0,1,0,0])*h*x"),
        ("(a1 - a2)^2*z[0,1]", "(q[0,0,0,1] - q[0,0,1,0])*h*x"),
    ];
    for (gamma, want) in cases {
        let got = limit(gamma, &id)?;
        ensure(got == global(&table, want, 4)?, || format!("{gamma} gave {got:?}"))?;
    }
    for (gamma, want) in [("z[1,1]", "q[1,1]"), ("z[-1,-1]", "q[-1,-1]")] {
        let got = limit(gamma, &nm)?;
        ensure(got == global(&table, want, 2)?, || format!("{gamma} gave {got:?}"))?;
    }
    let g = lift(parse_diffop("z[1,0] + z[0,1]", &space))?;
    let got = lift(classical_value(&lift(assemble_shift(&g, &table, &nm))?))?;
    ensure(got == global(&table, "-q[1,0] - q[0,1]", 2)?, || format!("z1 + z2 gave {got:?}"))?;

    // The z1z2 entries restrict to the Givental values on the fixed points.
    let model = lift(FixedPointModel::from_json(&read("gl2_tp1_model.json")))?;
    for lambda in [vec![1, 1], vec![-1, -1]] {
        let restricted = lift(model.restrict(lift(table.entry(&lambda))?))?;
        let givental = lift(shift_of_unit(&model, &lambda))?;
        ensure(restricted == givental, || format!("table entry {lambda:?} disagrees with S_λ(1)"))?;
    }
    Ok("4 limits, 1 classical value, 2 fixed-point cross-checks".into())
}

const PRIME: u64 = (1 << 61) - 1;

fn mod_mul(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(PRIME)) as u64
}

fn mod_int(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    (((x % &p) + &p) % &p).to_u64().expect("reduced")
}

fn mod_pow(a: u64, mut e: u64) -> u64 {
    let (mut base, mut acc) = (a, 1);
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, base);
        }
        base = mod_mul(base, base);
        e >>= 1;
    }
    acc
}

fn eval_mod(p: &Polynomial, point: &[u64]) -> Result<u64, String> {
    let mut acc = 0u64;
    for (m, c) in p.terms() {
        ensure(c.denom().is_one(), || format!("non-integral coefficient in {p}"))?;
        let mut t = mod_int(c.numer());
        for (x, e) in point.iter().zip(m.exponents()) {
            t = mod_mul(t, mod_pow(*x, u64::from(*e)));
        }
        acc = (acc + t) % PRIME;
    }
    Ok(acc)
}

/// `prod_{<eta, lambda> > 0} (eta . a)^{<eta, lambda>}` at `a`, modulo the prime.
fn seidel_oracle(theory: &GaugeTheory, lambda: &[i64], a: &[u64]) -> u64 {
    let signed = |x: i64| if x >= 0 { x as u64 } else { PRIME - (-x) as u64 };
    let mut acc = 1;
    for eta in theory.matter() {
        let p: i64 = eta.iter().zip(lambda).map(|(e, l)| e * l).sum();
        if p > 0 {
            let v = eta.iter().zip(a).fold(0, |s, (e, x)| (s + mod_mul(signed(*e), *x)) % PRIME);
            acc = mod_mul(acc, mod_pow(v, p as u64));
        }
    }
    acc
}

fn c3() -> Outcome {
    let theories: Vec<GaugeTheory> = (1..=2).flat_map(|r| theory_grid(r, 4, 2)).collect();
    let mut rng = sample::rng(3);
    let points: Vec<Vec<u64>> = (0..2).map(|_| (0..4).map(|_| rng.random_range(1..PRIME)).collect()).collect();
    let results = batch::map(&theories, |t| -> Result<usize, String> {
        let space = t.space(&[]);
        let lambdas = box_points(t.rank(), 3);
        for l in &lambdas {
            let (exp, p) = lift(seidel_linear_rep(t, l, &space))?;
            ensure(&exp == l, || format!("exponent {exp:?} for λ = {l:?}"))?;
            for a in &points {
                let a = &a[..space.len()];
                ensure(eval_mod(&p, a)? == seidel_oracle(t, l, a), || {
                    format!("{p} for λ = {l:?} on {:?}", t.matter())
                })?;
            }
        }
        Ok(lambdas.len())
    });
    let mut calls = 0;
    for r in results {
        calls += r?;
    }
    Ok(format!("{} theories, {calls} evaluations", theories.len()))
}

/// Under the classical convention h is absent, so the product is the
/// commutative `h = 0` one.
fn c4() -> Outcome {
    let mut report = Vec::new();
    for (k, conv) in HbarConvention::ALL.into_iter().enumerate() {
        let mut rng = sample::rng(40 + k as u64);
        let pairs: Vec<(GaugeTheory, Vec<i64>, Vec<i64>)> = (0..1000)
            .map(|_| {
                let t = sample::theory(&mut rng, 3, 5, 2);
                let l = sample::coweight(&mut rng, t.rank(), 2);
                let m = sample::coweight(&mut rng, t.rank(), 2);
                (t, l, m)
            })
            .collect();
        let (bad, first) = batch::count_failures(&pairs, |(t, l, m)| {
            let s = t.space(&[]);
            let product = |x: &DiffOp, y: &DiffOp| match conv {
                HbarConvention::Classical => classical_product(x, y),
                _ => x.twisted_product(y),
            };
            let x = basis_element(t, l, conv, &s).and_then(|x| product(&x, &basis_element(t, m, conv, &s)?));
            x.and_then(|y| is_member(&y, t, conv)).unwrap_or(false)
        });
        ensure(bad == 0, || format!("{conv}: {bad} products left the algebra, first {:?}", first.map(|i| &pairs[i])))?;
        report.push(format!("{conv} 1000/1000"));
    }
    Ok(report.join(", "))
}

fn c5() -> Outcome {
    let p1 = lift(FixedPointModel::p1(&[1, -1], &[1, 0], "x"))?;
    let p1b = lift(FixedPointModel::p1(&[1, 1], &[0, 1], "y"))?;
    let square = lift(p1.product(&p1b))?;
    let lambdas = box_points(2, 3);
    let pairs: Vec<(Vec<i64>, Vec<i64>)> = lambdas
        .iter()
        .flat_map(|l| lambdas.iter().map(move |m| (l.clone(), m.clone())))
        .collect();
    for (name, model) in [("P1", &p1), ("P1xP1", &square)] {
        let (bad, first) = batch::count_failures(&pairs, |(l, m)| module_check(model, l, m).unwrap_or(false));
        ensure(bad == 0, || format!("{name}: {bad} failures, first {:?}", first.map(|i| &pairs[i])))?;
    }
    let mut rng = sample::rng(5);
    let cases: Vec<(FixedPointModel, Vec<Pair>)> = (0..100)
        .map(|_| {
            let m = sample::model(&mut rng);
            let r = m.rank();
            let ps = (0..20)
                .map(|_| (sample::coweight(&mut rng, r, 3), sample::coweight(&mut rng, r, 3)))
                .collect();
            (m, ps)
        })
        .collect();
    let (bad, first) = batch::count_failures(&cases, |(m, ps)| {
        ps.iter().all(|(l, mu)| module_check(m, l, mu).unwrap_or(false))
    });
    ensure(bad == 0, || format!("{bad} random models fail, first {first:?}"))?;
    Ok(format!("{} pairs on each of P1, P1xP1; 100 random models x 20 pairs", pairs.len()))
}

/// `min_w #{positive affine roots b : t_lambda w (b) < 0}` for SL2 with the
/// simple root pairing as the first coordinate, searching `b = ±alpha + n delta`
/// over a window far larger than any inversion.
fn sl2_affine_length(lambda: i64) -> i64 {
    let window = 4 * lambda.abs() + 4;
    let negative = |sign: i64, n: i64| if sign > 0 { n < 0 } else { n <= 0 };
    let mut best = i64::MAX;
    for w in [1i64, -1] {
        let mut count = 0;
        for sign in [1i64, -1] {
            let first = if sign > 0 { 0 } else { 1 };
            for n in first..=window {
                let image = sign * w;
                if negative(image, n + image * lambda) {
                    count += 1;
                }
            }
        }
        best = best.min(count);
    }
    best
}

fn c6() -> Outcome {
    let mut allowed = 0;
    for (name, datum) in [("SL2", RootDatum::sl2()), ("GL2", RootDatum::gl2()), ("SL3", RootDatum::sl3())] {
        let lambdas = box_points(datum.rank(), 4);
        for p in datum.all_parabolics() {
            for l in &lambdas {
                if lift(is_p_allowed(&datum, l, &p))? {
                    allowed += 1;
                    let v = lift(virtual_dimension(&datum, l, &p))?;
                    ensure(v == 0, || format!("{name} λ = {l:?}: virtual dimension {v}"))?;
                }
            }
        }
        let b = datum.borel();
        let mut seen = BTreeMap::new();
        for l in &lambdas {
            let d = lift(peterson_data(&datum, l, &b))?;
            if let Some(prev) = seen.insert((d.novikov.clone(), d.schubert), l.clone()) {
                return Err(format!("{name}: {prev:?} and {l:?} have the same image"));
            }
        }
    }
    let sl2 = RootDatum::sl2();
    for l in -4..=4 {
        let d = lift(dim_cell(&sl2, &[l]))?;
        ensure(d == sl2_affine_length(l), || format!("dim_cell({l}) = {d}, oracle {}", sl2_affine_length(l)))?;
    }
    Ok(format!("{allowed} allowed pairs at virtual dimension 0, Borel images injective, SL2 cells match"))
}

fn hfree(rng: &mut sample::SampleRng, space: &Arc<VariableSpace>) -> DiffOp {
    classical_limit(&sample::diffop(rng, space, 2, 2)).expect("specialization")
}

fn c7() -> Outcome {
    let mut rng = sample::rng(7);
    let triples: Vec<[DiffOp; 3]> = (0..1000)
        .map(|i| {
            let space = VariableSpace::standard(1 + i % 2, 0, &[]).expect("names");
            [hfree(&mut rng, &space), hfree(&mut rng, &space), hfree(&mut rng, &space)]
        })
        .collect();
    let check = |[x, y, z]: &[DiffOp; 3]| -> coulomb_shift::Result<bool> {
        let xy = poisson_bracket(x, y)?;
        let anti = xy.add(&poisson_bracket(y, x)?)?.is_zero();
        let lhs = poisson_bracket(x, &classical_product(y, z)?)?;
        let rhs = classical_product(&xy, z)?.add(&classical_product(y, &poisson_bracket(x, z)?)?)?;
        let leibniz = lhs == rhs;
        let jacobi = poisson_bracket(x, &poisson_bracket(y, z)?)?
            .add(&poisson_bracket(y, &poisson_bracket(z, x)?)?)?
            .add(&poisson_bracket(z, &xy)?)?
            .is_zero();
        Ok(anti && leibniz && jacobi)
    };
    let (bad, first) = batch::count_failures(&triples, |t| check(t).unwrap_or(false));
    ensure(bad == 0, || format!("{bad} triples fail, first {first:?}"))?;

    let mut rng = sample::rng(77);
    for i in 0..200 {
        let space = VariableSpace::standard(1 + i % 2, 0, &[]).expect("names");
        let lambda = sample::coweight(&mut rng, space.n_equiv(), 3);
        let vars: Vec<usize> = (0..space.n_equiv()).collect();
        let p = RationalFunction::from_poly(sample::polynomial(&mut rng, &space, &vars, 3, 4));
        let t = lift(DiffOp::monomial(&space, lambda.clone(), RationalFunction::one(&space)))?;
        let got = lift(poisson_bracket(&t, &DiffOp::scalar(p.clone())))?;
        let want = lift(DiffOp::monomial(&space, lambda.clone(), directional_derivative(&p, &lambda)))?;
        ensure(got == want, || format!("{{t^{lambda:?}, {p}}}"))?;
    }
    Ok("1000 triples; 200 derivative identities".into())
}

fn c8() -> Outcome {
    let mut rng = sample::rng(8);
    let items: Vec<(GaugeTheory, HbarConvention, DiffOp)> = (0..1000)
        .map(|i| {
            let t = sample::theory(&mut rng, 2, 3, 2);
            let conv = HbarConvention::ALL[i % 3];
            let s = t.space(&[]);
            let x = sample::element(&mut rng, &t, conv, &s);
            (t, conv, x)
        })
        .collect();
    let results = batch::map(&items, |(t, conv, x)| -> coulomb_shift::Result<(bool, bool)> {
        Ok((is_member(x, t, *conv)?, largest_subspace_check(x, t, *conv)?))
    });
    let mut members = 0;
    for (i, r) in results.into_iter().enumerate() {
        let (m, g) = lift(r)?;
        ensure(m == g, || format!("element {i}: membership {m}, largest-subspace check {g}"))?;
        members += usize::from(m);
    }
    Ok(format!("{members} members, {} non-members, all agree", 1000 - members))
}

fn c9() -> Outcome {
    let theories: Vec<GaugeTheory> = theory_grid(1, 3, 2).into_iter().chain(theory_grid(2, 3, 1)).collect();
    let results = batch::map(&theories, |t| -> coulomb_shift::Result<usize> {
        let space = t.space(&[]);
        let splits = all_splits(t);
        let mut checked = 0;
        for conv in HbarConvention::ALL {
            for l in box_points(t.rank(), 2) {
                let x = basis_element(t, &l, conv, &space)?;
                for (n1, n2) in &splits {
                    let d = coproduct(&x, t, n1, n2)?;
                    if factor_through(&d, n1, n2, conv)?.is_none() {
                        return Err(coulomb_shift::Error::Internal(format!("{:?} λ = {l:?}", t.matter())));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    });
    let mut total = 0;
    for r in results {
        total += lift(r)?;
    }
    Ok(format!("{} theories, {total} (element, splitting) pairs", theories.len()))
}

/// Number, title, time budget in seconds and check.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "GL2 T*P1 assembly", 1, c1),
        (2, "non-equivariant limits", 1, c2),
        (3, "abelian Seidel monomial grid", 10, c3),
        (4, "closure under the twisted product", 30, c4),
        (5, "Givental module property", 60, c5),
        (6, "Peterson suite", 30, c6),
        (7, "Poisson structure", 30, c7),
        (8, "largest-subspace equivalence", 30, c8),
        (9, "coproduct compatibility", 10, c9),
    ];
    let mut failed = 0;
    for (n, name, bound, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(bound);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over the {bound}s bound; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n} {name:<36} {status} ({:.3}s < {bound}s) {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
