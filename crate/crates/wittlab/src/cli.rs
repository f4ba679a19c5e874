//! Batch command-line frontend: subcommands over the library plus the named
//! verification suites, with deterministic text or JSON output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 integrality failure.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Result, WittError};
use crate::nest::Nest;
use crate::qpoly::QPoly;
use crate::ring::{parse_scalar, RingElem, RingSpec};
use crate::symm::{Basis, Coef, HirzebruchMode, LambdaFormula, Partition, SymFn, Symm};
use crate::univ::{Indexing, StructKind};
use crate::witt::{GhostVec, WittVec};

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn ok(stdout: String) -> Outcome {
    Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    }
}

fn fail(code: i32, msg: String) -> Outcome {
    Outcome {
        code,
        stdout: String::new(),
        stderr: msg,
    }
}

fn error_code(e: &WittError) -> i32 {
    match e {
        WittError::NonIntegral(_)
        | WittError::InexactDivision(_)
        | WittError::NotInvertible(_)
        | WittError::GhostSolve { .. } => 3,
        _ => 2,
    }
}

/// Minimal flag scanner: collects `--name value` pairs and positionals.
struct Args {
    flags: BTreeMap<String, String>,
    positional: Vec<String>,
}

impl Args {
    fn parse(argv: &[String]) -> Result<Args> {
        let mut flags = BTreeMap::new();
        let mut positional = Vec::new();
        let mut i = 0;
        while i < argv.len() {
            let a = &argv[i];
            if let Some(name) = a.strip_prefix("--") {
                if name == "json" {
                    flags.insert("json".into(), "true".into());
                    i += 1;
                    continue;
                }
                if i + 1 >= argv.len() {
                    return Err(WittError::Parse(format!("flag --{} needs a value", name)));
                }
                flags.insert(name.to_string(), argv[i + 1].clone());
                i += 2;
            } else if a == "-" {
                // long coordinate lists may arrive on stdin
                let mut buf = String::new();
                use std::io::Read;
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| WittError::Parse(format!("stdin: {}", e)))?;
                let joined = buf.split_whitespace().collect::<Vec<_>>().join(",");
                positional.push(joined);
                i += 1;
            } else {
                positional.push(a.clone());
                i += 1;
            }
        }
        Ok(Args { flags, positional })
    }

    fn flag(&self, name: &str) -> Option<&str> {
        self.flags.get(name).map(|s| s.as_str())
    }

    fn required(&self, name: &str) -> Result<&str> {
        self.flag(name)
            .ok_or_else(|| WittError::Parse(format!("missing required flag --{}", name)))
    }

    fn json(&self) -> bool {
        self.flag("json").is_some()
    }

    fn cap(&self, default: u32) -> Result<u32> {
        match self.flag("cap") {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| WittError::Parse(format!("bad --cap {}", v))),
        }
    }
}

fn parse_ring(s: &str) -> Result<RingSpec> {
    let s = s.trim();
    if let Some(rest) = s.strip_suffix(']') {
        if let Some((base, vars)) = rest.split_once('[') {
            let base = parse_ring(base)?;
            let vars: Vec<String> = vars.split(',').map(|v| v.trim().to_string()).collect();
            return RingSpec::polynomial(base, vars);
        }
    }
    match s {
        "Z" | "z" => Ok(RingSpec::integers()),
        "Q" | "q" => Ok(RingSpec::rationals()),
        _ => {
            if let Some(m) = s.strip_prefix("Z/") {
                let m: BigInt = m
                    .parse()
                    .map_err(|_| WittError::Parse(format!("bad modulus {}", m)))?;
                RingSpec::modular(m)
            } else if let Some(p) = s.strip_prefix("Z_(").and_then(|x| x.strip_suffix(')')) {
                let p: u64 = p
                    .parse()
                    .map_err(|_| WittError::Parse(format!("bad prime {}", p)))?;
                RingSpec::p_local(p)
            } else {
                Err(WittError::Parse(format!(
                    "unknown ring {} (expected Z, Q, Z/m, Z_(p), or base[vars])",
                    s
                )))
            }
        }
    }
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| WittError::Parse(format!("bad integer {}", x)))
        })
        .collect()
}

fn parse_coords(ring: &RingSpec, s: &str) -> Result<Vec<RingElem>> {
    s.split(',')
        .map(|x| parse_scalar(ring, x.trim()))
        .collect()
}

fn parse_partition(s: &str) -> Result<Partition> {
    if s.trim().is_empty() {
        return Ok(Partition::empty());
    }
    let parts: Result<Vec<u32>> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| WittError::Parse(format!("bad part {}", x)))
        })
        .collect();
    Ok(Partition::new(parts?))
}

fn parse_indexing(args: &Args) -> Result<Indexing> {
    if let Some(nest) = args.flag("nest") {
        Ok(Indexing::Big(Nest::new(parse_u64_list(nest)?)?))
    } else if let (Some(p), Some(len)) = (args.flag("p"), args.flag("len")) {
        let p: u64 = p
            .parse()
            .map_err(|_| WittError::Parse(format!("bad prime {}", p)))?;
        let len: u32 = len
            .parse()
            .map_err(|_| WittError::Parse(format!("bad length {}", len)))?;
        if len == 0 {
            return Err(WittError::Parse("--len must be >= 1".into()));
        }
        Ok(Indexing::Padic { p, len: len - 1 })
    } else {
        Err(WittError::Parse(
            "need --nest LIST or --p P --len L".into(),
        ))
    }
}

fn witt_from_args(ring: &RingSpec, indexing: &Indexing, coords: &str) -> Result<WittVec> {
    let list = parse_coords(ring, coords)?;
    WittVec::from_list(ring, indexing.clone(), &list)
}

fn poly_text(p: &QPoly) -> String {
    format!("{}", p)
}

/// Run the CLI on the given arguments (without the program name).
pub fn run(argv: &[String]) -> Outcome {
    if argv.is_empty() {
        return fail(2, usage());
    }
    let sub = argv[0].as_str();
    let rest = &argv[1..];
    let args = match Args::parse(rest) {
        Ok(a) => a,
        Err(e) => return fail(2, format!("{}\n", e)),
    };
    let result = dispatch(sub, &args);
    match result {
        Ok(out) => out,
        Err(e) => fail(error_code(&e), format!("error: {}\n", e)),
    }
}

fn usage() -> String {
    "wittlab: exact arithmetic for Witt vectors and symmetric functions\n\
     subcommands: witt-poly struct-poly witt-calc ghost unghost coords teich dold\n\
     \u{20}            symm qsymm necklace burnside lambda verify\n\
     global flags: --json (JSON output), --cap N (weight/order cap)\n"
        .to_string()
}

fn dispatch(sub: &str, args: &Args) -> Result<Outcome> {
    match sub {
        "witt-poly" => cmd_witt_poly(args),
        "struct-poly" => cmd_struct_poly(args),
        "witt-calc" => cmd_witt_calc(args),
        "ghost" => cmd_ghost(args),
        "unghost" => cmd_unghost(args),
        "coords" => cmd_coords(args),
        "teich" => cmd_teich(args),
        "dold" => cmd_dold(args),
        "symm" => cmd_symm(args),
        "qsymm" => cmd_qsymm(args),
        "necklace" => cmd_necklace(args),
        "burnside" => cmd_burnside(args),
        "lambda" => cmd_lambda(args),
        "verify" => cmd_verify(args),
        "help" | "--help" | "-h" => Ok(ok(usage())),
        other => Err(WittError::Parse(format!("unknown subcommand {}", other))),
    }
}

fn cmd_witt_poly(args: &Args) -> Result<Outcome> {
    let flavor = args.flag("flavor").unwrap_or("big");
    let n: u64 = args
        .required("n")?
        .parse()
        .map_err(|_| WittError::Parse("bad --n".into()))?;
    let poly = match flavor {
        "big" => crate::univ::witt_polynomial_big(n),
        "padic" | "p-adic" => {
            let p: u64 = args
                .required("p")?
                .parse()
                .map_err(|_| WittError::Parse("bad --p".into()))?;
            crate::univ::witt_polynomial_padic(p, n as u32)
        }
        other => return Err(WittError::Parse(format!("unknown flavor {}", other))),
    };
    if args.json() {
        Ok(ok(format!("{}\n", serde_json::to_string(&poly.to_json()).unwrap())))
    } else {
        Ok(ok(format!("{}\n", poly_text(&poly))))
    }
}

fn cmd_struct_poly(args: &Args) -> Result<Outcome> {
    let kind = StructKind::parse(args.required("kind")?)?;
    let indexing = parse_indexing(args)?;
    let fam = crate::univ::structure_polys(kind, &indexing)?;
    if args.json() {
        Ok(ok(format!(
            "{}\n",
            serde_json::to_string(&fam.to_json()).unwrap()
        )))
    } else {
        let mut out = String::new();
        for (idx, poly) in &fam.polys {
            out.push_str(&format!("{}: {}\n", idx, poly_text(poly)));
        }
        Ok(ok(out))
    }
}

fn cmd_witt_calc(args: &Args) -> Result<Outcome> {
    let ring = parse_ring(args.flag("ring").unwrap_or("Z"))?;
    let indexing = parse_indexing(args)?;
    let op = args.required("op")?;
    if args.positional.is_empty() {
        return Err(WittError::Parse("need coordinate vectors".into()));
    }
    let a = witt_from_args(&ring, &indexing, &args.positional[0])?;
    let result = match op {
        "add" | "mul" | "sub" => {
            if args.positional.len() < 2 {
                return Err(WittError::Parse(format!("{} needs two vectors", op)));
            }
            let b = witt_from_args(&ring, &indexing, &args.positional[1])?;
            match op {
                "add" => crate::witt::witt_add(&a, &b)?,
                "mul" => crate::witt::witt_mul(&a, &b)?,
                _ => crate::witt::witt_sub(&a, &b)?,
            }
        }
        "neg" => crate::witt::witt_neg(&a)?,
        _ => {
            if let Some((name, param)) = op.split_once(':') {
                match name {
                    "verschiebung" | "v" => {
                        let n: u64 = param
                            .parse()
                            .map_err(|_| WittError::Parse("bad shift".into()))?;
                        crate::witt::verschiebung(n, &a)?
                    }
                    "frobenius" | "f" => {
                        let n: u64 = param
                            .parse()
                            .map_err(|_| WittError::Parse("bad index".into()))?;
                        crate::witt::frobenius(n, &a)?
                    }
                    "nmult" => {
                        let n: u64 = param
                            .parse()
                            .map_err(|_| WittError::Parse("bad multiplier".into()))?;
                        crate::witt::nmult(n, &a)?
                    }
                    "homothety" => {
                        let u = parse_scalar(&ring, param)?;
                        crate::witt::homothety(&u, &a)?
                    }
                    "ptypify" => {
                        let p: u64 = param
                            .parse()
                            .map_err(|_| WittError::Parse("bad prime".into()))?;
                        crate::witt::p_typify(&a, p)?
                    }
                    _ => return Err(WittError::Parse(format!("unknown op {}", op))),
                }
            } else {
                return Err(WittError::Parse(format!("unknown op {}", op)));
            }
        }
    };
    if args.json() {
        Ok(ok(format!(
            "{}\n",
            serde_json::to_string(&result.to_json()).unwrap()
        )))
    } else {
        let coords: Vec<String> = result
            .indexing
            .indices()
            .iter()
            .map(|&i| format!("{}", result.coord(i)))
            .collect();
        Ok(ok(format!("{}\n", coords.join(","))))
    }
}

fn cmd_ghost(args: &Args) -> Result<Outcome> {
    let ring = parse_ring(args.flag("ring").unwrap_or("Z"))?;
    let indexing = parse_indexing(args)?;
    let a = witt_from_args(
        &ring,
        &indexing,
        args.positional
            .first()
            .ok_or_else(|| WittError::Parse("need a coordinate vector".into()))?,
    )?;
    let g = crate::witt::ghost(&a)?;
    let values: Vec<String> = g
        .indexing
        .indices()
        .iter()
        .map(|i| format!("{}", g.values[i]))
        .collect();
    Ok(ok(format!("{}\n", values.join(","))))
}

fn cmd_unghost(args: &Args) -> Result<Outcome> {
    let ring = parse_ring(args.flag("ring").unwrap_or("Z"))?;
    let indexing = parse_indexing(args)?;
    let values = parse_coords(
        &ring,
        args.positional
            .first()
            .ok_or_else(|| WittError::Parse("need a ghost vector".into()))?,
    )?;
    let ids = indexing.indices();
    if values.len() != ids.len() {
        return Err(WittError::Parse(format!(
            "expected {} values, got {}",
            ids.len(),
            values.len()
        )));
    }
    let g = GhostVec {
        ring: ring.clone(),
        indexing: indexing.clone(),
        values: ids.into_iter().zip(values).collect(),
    };
    let x = crate::witt::from_ghost(&g)?;
    let coords: Vec<String> = x
        .indexing
        .indices()
        .iter()
        .map(|&i| format!("{}", x.coord(i)))
        .collect();
    Ok(ok(format!("{}\n", coords.join(","))))
}

fn cmd_coords(args: &Args) -> Result<Outcome> {
    let from = args.required("from")?.to_string();
    let to = args.required("to")?.to_string();
    let order: usize = args
        .flag("order")
        .unwrap_or("8")
        .parse()
        .map_err(|_| WittError::Parse("bad --order".into()))?;
    let z = RingSpec::integers();
    let data = args
        .positional
        .first()
        .ok_or_else(|| WittError::Parse("need a coordinate list".into()))?;
    let list = parse_coords(&z, data)?;
    // normalize to a series over Z
    let series = match from.as_str() {
        "series" => crate::series::BigOneSeries::new(&z, list)?,
        "witt" => {
            let nest = Nest::upto(list.len() as u64);
            let x = WittVec::from_list(&z, Indexing::Big(nest), &list)?;
            crate::series::from_witt(&x, order)?
        }
        "necklace" => crate::series::from_necklace(&list, order)?,
        other => return Err(WittError::Parse(format!("unknown source {}", other))),
    };
    let out = match to.as_str() {
        "series" => {
            let coeffs: Vec<String> = (1..=series.order())
                .map(|k| format!("{}", series.coeff(k)))
                .collect();
            coeffs.join(",")
        }
        "witt" => {
            let x = crate::series::to_witt(&series)?;
            let coords: Vec<String> = x
                .indexing
                .indices()
                .iter()
                .map(|&i| format!("{}", x.coord(i)))
                .collect();
            coords.join(",")
        }
        "necklace" => {
            let (c, integral) = crate::series::to_necklace(&series)?;
            if !integral {
                return Err(WittError::NonIntegral(
                    "no integral necklace coordinates exist".into(),
                ));
            }
            let coords: Vec<String> = c.iter().map(|v| format!("{}", v)).collect();
            coords.join(",")
        }
        other => return Err(WittError::Parse(format!("unknown target {}", other))),
    };
    Ok(ok(format!("{}\n", out)))
}

fn cmd_teich(args: &Args) -> Result<Outcome> {
    let p: u64 = args
        .required("p")?
        .parse()
        .map_err(|_| WittError::Parse("bad --p".into()))?;
    let k: u32 = args
        .required("k")?
        .parse()
        .map_err(|_| WittError::Parse("bad --k".into()))?;
    if !crate::arith::is_prime(p) {
        return Err(WittError::Parse(format!("{} is not prime", p)));
    }
    let mut out = String::new();
    if let (Some(a), Some(b)) = (args.flag("a"), args.flag("b")) {
        let a: BigInt = a
            .parse()
            .map_err(|_| WittError::Parse("bad --a".into()))?;
        let b: BigInt = b
            .parse()
            .map_err(|_| WittError::Parse("bad --b".into()))?;
        let digits = crate::witt::teich_digit_sum(&a, &b, p, k)?;
        let ds: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
        out.push_str(&format!("digits({} + {}) = {}\n", a, b, ds.join(",")));
        return Ok(ok(out));
    }
    out.push_str(&format!("Teichmuller lifts mod {}^{}:\n", p, k));
    for a in 0..p {
        let t = crate::witt::teichmuller_lift_mod(&BigInt::from(a), p, k);
        out.push_str(&format!("  t({}) = {}\n", a, t));
    }
    out.push_str("digit table c_0..c_(k-1) for t(a) + t(b):\n");
    for a in 0..p {
        for b in a..p {
            let digits =
                crate::witt::teich_digit_sum(&BigInt::from(a), &BigInt::from(b), p, k)?;
            let ds: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("  {} + {}: {}\n", a, b, ds.join(",")));
        }
    }
    Ok(ok(out))
}

fn cmd_dold(args: &Args) -> Result<Outcome> {
    let data = args
        .positional
        .first()
        .ok_or_else(|| WittError::Parse("need a comma-separated sequence".into()))?;
    let seq: Result<Vec<BigInt>> = data
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| WittError::Parse(format!("bad integer {}", x)))
        })
        .collect();
    let seq = seq?;
    let rep = crate::witt::dold_test(&seq, seq.len())?;
    if rep.pass() {
        let exact = if rep.exact { ", exactly realizable" } else { "" };
        Ok(ok(format!(
            "PASS (ghost-realizable over Z up to n={}{})\n",
            seq.len(),
            exact
        )))
    } else {
        Ok(Outcome {
            code: 1,
            stdout: format!(
                "FAIL at n={} (Moebius transform not divisible)\n",
                rep.first_failure.unwrap_or(0)
            ),
            stderr: String::new(),
        })
    }
}

fn symfn_output(args: &Args, f: &SymFn) -> Outcome {
    if args.json() {
        ok(format!("{}\n", serde_json::to_string(&f.to_json()).unwrap()))
    } else {
        ok(format!("{}\n", f))
    }
}

fn cmd_symm(args: &Args) -> Result<Outcome> {
    let action = args
        .positional
        .first()
        .ok_or_else(|| WittError::Parse("symm needs an action".into()))?
        .as_str();
    let symm = Symm::with_cap(args.cap(10)?);
    match action {
        "convert" => {
            let from = Basis::parse(args.required("from")?)?;
            let to = Basis::parse(args.required("to")?)?;
            let part = parse_partition(
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need a partition".into()))?,
            )?;
            let f = SymFn::single(from, part, Coef::one());
            let g = symm.convert(&f, to)?;
            Ok(symfn_output(args, &g))
        }
        "mul" => {
            let basis = Basis::parse(args.flag("basis").unwrap_or("m"))?;
            let a = parse_partition(
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need two partitions".into()))?,
            )?;
            let b = parse_partition(
                args.positional
                    .get(2)
                    .ok_or_else(|| WittError::Parse("need two partitions".into()))?,
            )?;
            let prod = symm.multiply(
                &SymFn::single(basis, a, Coef::one()),
                &SymFn::single(basis, b, Coef::one()),
                basis,
            )?;
            Ok(symfn_output(args, &prod))
        }
        "inner" => {
            let lb = Basis::parse(args.flag("left").unwrap_or("h"))?;
            let rb = Basis::parse(args.flag("right").unwrap_or("m"))?;
            let a = parse_partition(
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need two partitions".into()))?,
            )?;
            let b = parse_partition(
                args.positional
                    .get(2)
                    .ok_or_else(|| WittError::Parse("need two partitions".into()))?,
            )?;
            let v = symm.hall_inner(
                &SymFn::single(lb, a, Coef::one()),
                &SymFn::single(rb, b, Coef::one()),
            )?;
            Ok(ok(format!("{}\n", v)))
        }
        "plethysm" => {
            let fb = Basis::parse(args.flag("fb").unwrap_or("h"))?;
            let gb = Basis::parse(args.flag("gb").unwrap_or("p"))?;
            let a = parse_partition(
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need two partitions".into()))?,
            )?;
            let b = parse_partition(
                args.positional
                    .get(2)
                    .ok_or_else(|| WittError::Parse("need two partitions".into()))?,
            )?;
            let v = symm.plethysm(
                &SymFn::single(fb, a, Coef::one()),
                &SymFn::single(gb, b, Coef::one()),
            )?;
            Ok(symfn_output(args, &v))
        }
        "schur" => {
            let part = parse_partition(
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need a partition".into()))?,
            )?;
            let f = symm.schur(&part)?;
            Ok(symfn_output(args, &f))
        }
        "hirzebruch" => {
            let n: u32 = args
                .required("n")?
                .parse()
                .map_err(|_| WittError::Parse("bad --n".into()))?;
            let mode = match args.flag("mode").unwrap_or("multiplicative") {
                "multiplicative" => HirzebruchMode::Multiplicative,
                "additive" => HirzebruchMode::Additive,
                other => return Err(WittError::Parse(format!("unknown mode {}", other))),
            };
            let qseries = match args.required("q")? {
                "todd" => todd_series(n as usize + 1),
                text => {
                    let parts: Result<Vec<Coef>> = text
                        .split(',')
                        .map(|x| crate::qpoly::parse_rational(x.trim()))
                        .collect();
                    parts?
                }
            };
            let f = symm.hirzebruch_sequence(&qseries, n, mode)?;
            Ok(symfn_output(args, &f))
        }
        other => Err(WittError::Parse(format!("unknown symm action {}", other))),
    }
}

/// Coefficients of the Todd series z / (1 - e^{-z}) up to the given length.
pub fn todd_series(len: usize) -> Vec<Coef> {
    use num_rational::BigRational;
    use num_traits::One;
    // denominators: (1 - e^{-z})/z = sum_{k>=0} (-1)^k z^k / (k+1)!
    let mut den = Vec::with_capacity(len);
    let mut fact = BigInt::from(1);
    for k in 0..len {
        fact *= BigInt::from(k as u64 + 1);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        den.push(BigRational::new(BigInt::from(sign), fact.clone()));
    }
    // reciprocal series
    let mut todd = vec![BigRational::one()];
    for k in 1..len {
        let mut acc = BigRational::from_integer(BigInt::from(0));
        for i in 1..=k {
            acc += &den[i] * &todd[k - i];
        }
        todd.push(-acc);
    }
    todd
}

fn cmd_qsymm(args: &Args) -> Result<Outcome> {
    use crate::qsymm::{Composition, QSymFn, QSymm};
    let action = args
        .positional
        .first()
        .ok_or_else(|| WittError::Parse("qsymm needs an action".into()))?
        .as_str();
    let q = QSymm {
        cap: args.cap(8)?,
        matrix_cap: 6,
    };
    let parse_comp = |s: &str| -> Result<Composition> {
        if s.trim().is_empty() {
            return Ok(Composition::empty());
        }
        let entries: Result<Vec<u32>> = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| WittError::Parse(format!("bad entry {}", x)))
            })
            .collect();
        Composition::new(entries?)
    };
    match action {
        "shuffle" => {
            let a = parse_comp(
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need two compositions".into()))?,
            )?;
            let b = parse_comp(
                args.positional
                    .get(2)
                    .ok_or_else(|| WittError::Parse("need two compositions".into()))?,
            )?;
            let prod = q.overlapping_shuffle(&a, &b)?;
            if args.json() {
                Ok(ok(format!(
                    "{}\n",
                    serde_json::to_string(&prod.to_json()).unwrap()
                )))
            } else {
                Ok(ok(format!("{}\n", prod)))
            }
        }
        "comul" => {
            let a = parse_comp(
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need a composition".into()))?,
            )?;
            let which = args.flag("which").unwrap_or("cut");
            let f = QSymFn::single(a, Coef::one());
            let t = match which {
                "cut" => q.cut_comul(&f),
                "prod" => q.comul_prod(&f)?,
                other => return Err(WittError::Parse(format!("unknown comul {}", other))),
            };
            let mut out = String::new();
            for ((l, r), c) in &t.terms {
                out.push_str(&format!("{} (x) {}: {}\n", l, r, c));
            }
            Ok(ok(out))
        }
        "lambda" => {
            let n: u32 = args
                .required("n")?
                .parse()
                .map_err(|_| WittError::Parse("bad --n".into()))?;
            let a = parse_comp(
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need a composition".into()))?,
            )?;
            let v = q.lambda(n, &QSymFn::single(a, Coef::one()))?;
            Ok(ok(format!("{}\n", v)))
        }
        other => Err(WittError::Parse(format!("unknown qsymm action {}", other))),
    }
}

fn cmd_necklace(args: &Args) -> Result<Outcome> {
    let action = args
        .positional
        .first()
        .ok_or_else(|| WittError::Parse("necklace needs an action".into()))?
        .as_str();
    match action {
        "number" => {
            let alpha: i64 = args
                .required("alpha")?
                .parse()
                .map_err(|_| WittError::Parse("bad --alpha".into()))?;
            let n: u64 = args
                .required("n")?
                .parse()
                .map_err(|_| WittError::Parse("bad --n".into()))?;
            let m = crate::necklace::necklace_number(&BigInt::from(alpha), n);
            Ok(ok(format!("{}\n", m)))
        }
        "identity" => {
            use crate::necklace::NecklaceIdentity;
            let name = args.required("name")?;
            let which = match name {
                "product" => NecklaceIdentity::Product,
                "power" => NecklaceIdentity::Power,
                "cyclotomic" => NecklaceIdentity::Cyclotomic,
                "strehl" => NecklaceIdentity::Strehl,
                other => return Err(WittError::Parse(format!("unknown identity {}", other))),
            };
            let alpha: i64 = args.flag("alpha").unwrap_or("2").parse().unwrap_or(2);
            let beta: i64 = args.flag("beta").unwrap_or("3").parse().unwrap_or(3);
            let r: u64 = args.flag("r").unwrap_or("2").parse().unwrap_or(2);
            let bound: u64 = args.flag("bound").unwrap_or("8").parse().unwrap_or(8);
            let pass = crate::necklace::necklace_identity_check(which, alpha, beta, r, bound)?;
            if pass {
                Ok(ok(format!("PASS ({} identity to bound {})\n", name, bound)))
            } else {
                Ok(Outcome {
                    code: 1,
                    stdout: format!("FAIL ({} identity)\n", name),
                    stderr: String::new(),
                })
            }
        }
        other => Err(WittError::Parse(format!("unknown necklace action {}", other))),
    }
}

fn cmd_burnside(args: &Args) -> Result<Outcome> {
    let action = args
        .positional
        .first()
        .ok_or_else(|| WittError::Parse("burnside needs an action".into()))?
        .as_str();
    let z = RingSpec::integers();
    match action {
        "diagram" => {
            let bound: u64 = args.flag("bound").unwrap_or("12").parse().unwrap_or(12);
            let coords = parse_coords(
                &z,
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need Witt coordinates".into()))?,
            )?;
            let nest = Nest::upto(coords.len() as u64);
            let x = WittVec::from_list(&z, Indexing::Big(nest), &coords)?;
            let rep = crate::necklace::diagram_check(&x, bound.min(coords.len() as u64))?;
            let mut out = String::new();
            out.push_str(&format!(
                "ghost leg (phi T = w): {}\n",
                if rep.ghost_leg { "PASS" } else { "FAIL" }
            ));
            out.push_str(&format!(
                "series leg (syP T = from_witt): {}\n",
                if rep.series_leg { "PASS" } else { "FAIL" }
            ));
            out.push_str(&format!(
                "necklace leg (itp^-1 T = necklace coords): {}\n",
                if rep.necklace_leg { "PASS" } else { "FAIL" }
            ));
            Ok(Outcome {
                code: if rep.all_pass() { 0 } else { 1 },
                stdout: out,
                stderr: String::new(),
            })
        }
        "syp" => {
            let order: usize = args.flag("order").unwrap_or("8").parse().unwrap_or(8);
            let spec = args
                .positional
                .get(1)
                .ok_or_else(|| WittError::Parse("need multiplicities r:b,...".into()))?;
            let mut x = crate::necklace::CyclicSet::zero(order as u64);
            for part in spec.split(',') {
                let (r, b) = part
                    .split_once(':')
                    .ok_or_else(|| WittError::Parse("multiplicities are r:b".into()))?;
                let r: u64 = r
                    .trim()
                    .parse()
                    .map_err(|_| WittError::Parse("bad orbit length".into()))?;
                let b: BigInt = b
                    .trim()
                    .parse()
                    .map_err(|_| WittError::Parse("bad multiplicity".into()))?;
                x.insert(r, b);
            }
            let s = crate::necklace::sy_p(&x, order)?;
            Ok(ok(format!("{}\n", s)))
        }
        "T" | "t" => {
            let bound: u64 = args.flag("bound").unwrap_or("12").parse().unwrap_or(12);
            let coords = parse_coords(
                &z,
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need Witt coordinates".into()))?,
            )?;
            let nest = Nest::upto(coords.len() as u64);
            let x = WittVec::from_list(&z, Indexing::Big(nest), &coords)?;
            let t = crate::necklace::t_map(&x, bound)?;
            if args.json() {
                Ok(ok(format!(
                    "{}\n",
                    serde_json::to_string(&t.to_json()).unwrap()
                )))
            } else {
                let parts: Vec<String> = t
                    .multiplicities()
                    .iter()
                    .map(|(r, b)| format!("{}*C{}", b, r))
                    .collect();
                Ok(ok(format!("{}\n", parts.join(" + "))))
            }
        }
        other => Err(WittError::Parse(format!("unknown burnside action {}", other))),
    }
}

fn cmd_lambda(args: &Args) -> Result<Outcome> {
    let action = args
        .positional
        .first()
        .ok_or_else(|| WittError::Parse("lambda needs an action".into()))?
        .as_str();
    let z = RingSpec::integers();
    match action {
        "ah" => {
            let outer: u64 = args.flag("outer").unwrap_or("3").parse().unwrap_or(3);
            let inner: u64 = args.flag("inner").unwrap_or("3").parse().unwrap_or(3);
            let coords = parse_coords(
                &z,
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need Witt coordinates".into()))?,
            )?;
            let nest = Nest::upto(coords.len() as u64);
            let x = WittVec::from_list(&z, Indexing::Big(nest), &coords)?;
            let ah = crate::series::artin_hasse(&x, outer, inner)?;
            let mut out = String::new();
            for (n, zn) in &ah.outer {
                let cs: Vec<String> = zn
                    .indexing
                    .indices()
                    .iter()
                    .map(|&i| format!("{}", zn.coord(i)))
                    .collect();
                out.push_str(&format!("outer {}: ({})\n", n, cs.join(",")));
            }
            Ok(ok(out))
        }
        "adams" => {
            let n: u64 = args
                .required("n")?
                .parse()
                .map_err(|_| WittError::Parse("bad --n".into()))?;
            let coeffs = parse_coords(
                &z,
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need series coefficients".into()))?,
            )?;
            let a = crate::series::BigOneSeries::new(&z, coeffs)?;
            let psi = crate::series::adams(n, &a)?;
            Ok(ok(format!("{}\n", psi)))
        }
        "universal-formula" => {
            let symm = Symm::with_cap(args.cap(10)?);
            let kind = args.required("kind")?;
            let formula = match kind {
                "sum" => LambdaFormula::Sum(
                    args.required("n")?
                        .parse()
                        .map_err(|_| WittError::Parse("bad --n".into()))?,
                ),
                "product" => LambdaFormula::Product(
                    args.required("n")?
                        .parse()
                        .map_err(|_| WittError::Parse("bad --n".into()))?,
                ),
                "iterate" => LambdaFormula::Iterate(
                    args.required("m")?
                        .parse()
                        .map_err(|_| WittError::Parse("bad --m".into()))?,
                    args.required("n")?
                        .parse()
                        .map_err(|_| WittError::Parse("bad --n".into()))?,
                ),
                other => return Err(WittError::Parse(format!("unknown formula kind {}", other))),
            };
            let p = symm.universal_lambda_formula(formula)?;
            Ok(ok(format!(
                "{}\n(X_i stands for lambda^i(x), Y_j for lambda^j(y))\n",
                poly_text(&p)
            )))
        }
        "cartier" => {
            // apply a single operator V_m <c> f_n to a series over Z
            let m: u64 = args.flag("m").unwrap_or("1").parse().unwrap_or(1);
            let n: u64 = args.flag("n").unwrap_or("1").parse().unwrap_or(1);
            let c = parse_scalar(&z, args.flag("c").unwrap_or("1"))?;
            let bound: u64 = args.flag("bound").unwrap_or("8").parse().unwrap_or(8);
            let coeffs = parse_coords(
                &z,
                args.positional
                    .get(1)
                    .ok_or_else(|| WittError::Parse("need series coefficients".into()))?,
            )?;
            let a = crate::series::BigOneSeries::new(&z, coeffs)?;
            let op = crate::cartier::CartierOp::term(m, c, n, bound);
            let img = crate::cartier::cartier_apply(&op, &a)?;
            Ok(ok(format!("{}\n", img)))
        }
        other => Err(WittError::Parse(format!("unknown lambda action {}", other))),
    }
}

fn cmd_verify(args: &Args) -> Result<Outcome> {
    let name = args
        .positional
        .first()
        .ok_or_else(|| {
            WittError::Parse(format!(
                "verify needs a suite name: {}",
                crate::verify::SUITE_NAMES.join(", ")
            ))
        })?
        .as_str();
    let cap = args.cap(8)?;
    let suite = crate::verify::run_suite(name, cap)?;
    let mut out = String::new();
    let mut all = true;
    for check in &suite.checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("{}: {}\n", status, check.label));
        all &= check.pass;
    }
    if all {
        if name == "r-polys" {
            let max = args.flag("max").unwrap_or("6");
            out.push_str(&format!("OK: r_1..r_{} match reference\n", max));
        } else {
            out.push_str(&format!("OK: {} ({} checks)\n", name, suite.checks.len()));
        }
        Ok(ok(out))
    } else {
        Ok(Outcome {
            code: 1,
            stdout: out,
            stderr: String::new(),
        })
    }
}
