//! Subcommand implementations: parse arguments, call the library, shape the report.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use hypleaf_core::cover::{
    build_double_cover, genus_from_chi, leaf_genus_growth, pillowcase_genus, riemann_hurwitz_chi,
    Base, RamificationProfile,
};
use hypleaf_core::holonomy::{
    orbit_cells, rotation_number, stabilizer_search, verify_commutator_product, AffineMap,
    CircleGen, Mobius, DEFAULT_SEED, FIXED_TOLERANCE,
};
use hypleaf_core::homology::{homology_basis, induced_action_in, smith_rank, torelli_order};
use hypleaf_core::linalg::IntMatrix;
use hypleaf_core::origami::{build, lift_automorphism, pillowcase_origami, LiftOutcome};
use hypleaf_core::quadratic::QuadIrrational;
use hypleaf_core::sl2z::{classify, periodic_points, word_product};
use hypleaf_core::torus3::{
    euler_report, geometry_classify, parse_rational_vector, period_group_rank, BundleData,
    BundleSource, MonodromyClass, MonodromySummary,
};
use hypleaf_core::{Error, IntMatrix2, Origami, Perm, Token};

use crate::report::Report;
use crate::{
    BaseArg, ClassArg, ClassifyArgs, Command, CoverCmd, HolonomyCmd, HomologyCmd, MonodromyArgs,
    OrigamiArgs, OrigamiCmd, PipelineCmd, SourceArg, Torus3Cmd,
};

#[derive(Debug, Error)]
pub enum CliError {
    /// The arguments could not be understood.
    #[error("{0}")]
    Usage(String),
    /// A computation rejected well-formed input.
    #[error(transparent)]
    Domain(#[from] Error),
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn parse_matrix(s: &str) -> Result<IntMatrix2> {
    s.parse().map_err(usage)
}

fn parse_origami(a: &OrigamiArgs) -> Result<Origami> {
    if let Some(name) = &a.named {
        return Origami::named(name).ok_or_else(|| {
            usage(format!(
                "unknown origami {name:?} (known: torus, wollmilchsau)"
            ))
        });
    }
    let (Some(h), Some(v)) = (&a.h, &a.v) else {
        return Err(usage("give --named or both --h and --v"));
    };
    origami_from_cycles(h, v, a.d)
}

fn origami_from_cycles(h: &str, v: &str, d: Option<usize>) -> Result<Origami> {
    let d = match d {
        Some(d) => d,
        None => {
            let hp = Perm::parse_cycles(h, None).map_err(usage)?;
            let vp = Perm::parse_cycles(v, None).map_err(usage)?;
            hp.len().max(vp.len()).max(1)
        }
    };
    let hp = Perm::parse_cycles(h, Some(d)).map_err(usage)?;
    let vp = Perm::parse_cycles(v, Some(d)).map_err(usage)?;
    Ok(Origami::new(hp, vp)?)
}

fn origami_inputs(a: &OrigamiArgs) -> Value {
    json!({ "named": a.named, "h": a.h, "v": a.v, "d": a.d })
}

fn matrix_value(m: &IntMatrix2) -> Value {
    to_value(m)
}

fn cone_angles(stratum: &[u32]) -> Vec<String> {
    stratum
        .iter()
        .map(|&l| {
            if l == 1 {
                "2π".to_string()
            } else {
                format!("{}π", 2 * l)
            }
        })
        .collect()
}

fn origami_summary(o: &Origami) -> Value {
    let one_based: Vec<Vec<usize>> = o
        .vertices()
        .into_iter()
        .map(|c| c.into_iter().map(|i| i + 1).collect())
        .collect();
    json!({
        "origami": to_value(o),
        "genus": o.genus(),
        "stratum": o.stratum(),
        "cone_angles": cone_angles(&o.stratum()),
        "vertices": one_based,
    })
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Classify(a) => run_classify(a),
        Command::Origami(c) => run_origami(c),
        Command::Cover(c) => run_cover(c),
        Command::Homology(c) => run_homology(c),
        Command::Torus3(c) => run_torus3(c),
        Command::Holonomy(c) => run_holonomy(c),
        Command::Pipeline(c) => run_pipeline(c),
        Command::Schema => unreachable!("handled before dispatch"),
    }
}

fn run_classify(a: &ClassifyArgs) -> Result<Report> {
    let m = parse_matrix(&a.matrix)?;
    let class = classify(&m)?;
    let periodic = match a.periodic {
        Some(n) => Some(to_value(&periodic_points(&m, n)?)),
        None => None,
    };
    Ok(Report::new(
        "classify",
        json!({ "matrix": a.matrix, "periodic": a.periodic }),
        json!({
            "matrix": matrix_value(&m),
            "trace": m.trace(),
            "classification": to_value(&class),
            "periodic_points": periodic,
        }),
    ))
}

fn parse_word(s: &str) -> Result<Vec<Token>> {
    s.split_whitespace()
        .map(|t| t.parse::<Token>().map_err(usage))
        .collect()
}

fn run_origami(c: &OrigamiCmd) -> Result<Report> {
    match c {
        OrigamiCmd::Build(a) => {
            let o = parse_origami(a)?;
            let b = build(o.sigma_h().clone(), o.sigma_v().clone())?;
            Ok(Report::new(
                "origami build",
                origami_inputs(a),
                origami_summary(&b.origami),
            ))
        }
        OrigamiCmd::Act { origami, word } => {
            let o = parse_origami(origami)?;
            let w = parse_word(word)?;
            let image = o.act_word(&w);
            Ok(Report::new(
                "origami act",
                json!({ "origami": origami_inputs(origami), "word": word }),
                json!({
                    "word": to_value(&w),
                    "derivative": matrix_value(&word_product(&w)),
                    "image": origami_summary(&image),
                    "isomorphic_to_input": image.is_isomorphic(&o),
                }),
            ))
        }
        OrigamiCmd::Lift { origami, matrix } => {
            let o = parse_origami(origami)?;
            let m = parse_matrix(matrix)?;
            let outcome = lift_automorphism(&m, &o)?;
            let verified = outcome.witness().map(|w| w.verify(&o));
            Ok(Report::new(
                "origami lift",
                json!({ "origami": origami_inputs(origami), "matrix": matrix }),
                json!({
                    "matrix": matrix_value(&m),
                    "origami": origami_summary(&o),
                    "outcome": to_value(&outcome),
                    "verified": verified,
                }),
            ))
        }
    }
}

fn parse_exponents(s: &str) -> Result<[u32; 4]> {
    let v: Vec<u32> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("bad exponent {t:?}")))
        })
        .collect::<Result<_>>()?;
    v.try_into()
        .map_err(|v: Vec<u32>| usage(format!("expected four exponents, got {}", v.len())))
}

fn parse_pair(s: &str) -> Result<(u32, u32)> {
    let v: Vec<u32> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("bad pair entry {t:?}")))
        })
        .collect::<Result<_>>()?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => Err(usage(format!("expected \"d_i,e_i\", got {s:?}"))),
    }
}

fn run_cover(c: &CoverCmd) -> Result<Report> {
    match c {
        CoverCmd::Pillowcase { d, a, model } => {
            let exps = parse_exponents(a)?;
            let p = pillowcase_genus(*d, exps)?;
            let mut results = to_value(&p);
            if *model && p.translation_surface {
                let o = pillowcase_origami(*d, exps)?;
                results["square_tiled_model"] = origami_summary(&o);
            }
            Ok(Report::new(
                "cover pillowcase",
                json!({ "d": d, "a": a, "model": model }),
                results,
            ))
        }
        CoverCmd::Double { n } => {
            let spec = build_double_cover(*n)?;
            Ok(Report::new(
                "cover double",
                json!({ "n": n }),
                json!({
                    "cover": to_value(&spec),
                    "profile": to_value(&spec.profile()),
                    "genus": spec.genus()?,
                    "relation_holds": spec.relation_holds(),
                }),
            ))
        }
        CoverCmd::Rh {
            base,
            degree,
            fibres,
        } => {
            let fibre_lists: Vec<Vec<u32>> = fibres
                .split(';')
                .map(|f| {
                    f.split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<u32>()
                                .map_err(|_| usage(format!("bad index {t:?}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            let base = match base {
                BaseArg::Torus => Base::Torus,
                BaseArg::Sphere => Base::Sphere,
            };
            let profile = RamificationProfile::from_fibres(*degree, fibre_lists)?;
            let chi = riemann_hurwitz_chi(base.euler_characteristic(), &profile)?;
            Ok(Report::new(
                "cover rh",
                json!({ "base": to_value(&base), "degree": degree, "fibres": fibres }),
                json!({
                    "profile": to_value(&profile),
                    "euler_characteristic": chi,
                    "genus": genus_from_chi(chi)?,
                }),
            ))
        }
        CoverCmd::Growth { d, pair, k } => {
            let p = parse_pair(pair)?;
            let g = leaf_genus_growth(*d, &[p], *k)?;
            Ok(Report::new(
                "cover growth",
                json!({ "d": d, "pair": pair, "k": k }),
                to_value(&g),
            ))
        }
    }
}

fn parse_int_matrix(s: &str) -> Result<IntMatrix> {
    let rows: Vec<Vec<i64>> =
        serde_json::from_str(s).map_err(|e| usage(format!("bad matrix {s:?}: {e}")))?;
    IntMatrix::from_rows(rows).map_err(usage)
}

fn standard_form(n: usize) -> Result<IntMatrix> {
    if !n.is_multiple_of(2) {
        return Err(usage(format!(
            "no standard symplectic form in odd dimension {n}"
        )));
    }
    let mut j = IntMatrix::zeros(n, n);
    for i in (0..n).step_by(2) {
        j[(i, i + 1)] = 1;
        j[(i + 1, i)] = -1;
    }
    Ok(j)
}

fn no_lift(m: &IntMatrix2) -> CliError {
    CliError::Domain(Error::Parameter(format!(
        "the matrix {m} does not lift to this origami"
    )))
}

fn run_homology(c: &HomologyCmd) -> Result<Report> {
    match c {
        HomologyCmd::Basis(a) => {
            let o = parse_origami(a)?;
            let b = homology_basis(&o)?;
            let (rank, torsion) = smith_rank(&o);
            let torsion: Vec<String> = torsion.iter().map(BigInt::to_string).collect();
            Ok(Report::new(
                "homology basis",
                origami_inputs(a),
                json!({
                    "genus": o.genus(),
                    "basis": to_value(&b),
                    "smith_rank": rank,
                    "torsion": torsion,
                }),
            ))
        }
        HomologyCmd::Action { origami, matrix } => {
            let o = parse_origami(origami)?;
            let m = parse_matrix(matrix)?;
            let w = lift_automorphism(&m, &o)?
                .into_witness()
                .ok_or_else(|| no_lift(&m))?;
            let basis = homology_basis(&o)?;
            let a = induced_action_in(&w, &basis)?;
            Ok(Report::new(
                "homology action",
                json!({ "origami": origami_inputs(origami), "matrix": matrix }),
                json!({
                    "witness": to_value(&w),
                    "intersection_form": to_value(&basis.intersection_form),
                    "action": to_value(&a),
                }),
            ))
        }
        HomologyCmd::Torelli { m, j } => {
            let mm = parse_int_matrix(m)?;
            let jj = match j {
                Some(j) => parse_int_matrix(j)?,
                None => standard_form(mm.nrows())?,
            };
            let t = torelli_order(&mm, &jj)?;
            Ok(Report::new(
                "homology torelli",
                json!({ "m": m, "j": j }),
                to_value(&t),
            ))
        }
    }
}

fn parse_lambda(s: &str) -> Result<QuadIrrational> {
    let v: Vec<i128> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i128>()
                .map_err(|_| usage(format!("bad lambda entry {t:?}")))
        })
        .collect::<Result<_>>()?;
    match v[..] {
        [p, q, n, r] if r != 0 && n > 0 => Ok(QuadIrrational::new(p, q, n, r)),
        _ => Err(usage(format!(
            "expected lambda as \"p,q,D,r\" with D > 0, r != 0, got {s:?}"
        ))),
    }
}

fn parse_summary(a: &MonodromyArgs) -> Result<MonodromySummary> {
    if let Some(m) = &a.matrix {
        return Ok(MonodromySummary::from_matrix(&parse_matrix(m)?)?);
    }
    let (Some(genus), Some(class)) = (a.genus, a.class) else {
        return Err(usage("give --matrix, or --genus and --class"));
    };
    let lambda = || {
        a.lambda
            .as_deref()
            .ok_or_else(|| usage("--lambda is required for Anosov classes"))
            .and_then(parse_lambda)
    };
    let class = match class {
        ClassArg::Periodic => MonodromyClass::Periodic,
        ClassArg::Reducible => MonodromyClass::Reducible,
        ClassArg::Anosov => MonodromyClass::Anosov { lambda: lambda()? },
        ClassArg::PseudoAnosov => MonodromyClass::PseudoAnosov { lambda: lambda()? },
    };
    Ok(MonodromySummary::new(genus, class, a.torelli_k)?)
}

fn monodromy_inputs(a: &MonodromyArgs) -> Value {
    json!({
        "matrix": a.matrix,
        "genus": a.genus,
        "class": a.class.map(|c| format!("{c:?}")),
        "lambda": a.lambda,
        "torelli_k": a.torelli_k,
    })
}

fn run_torus3(c: &Torus3Cmd) -> Result<Report> {
    match c {
        Torus3Cmd::Geometry(a) => {
            let s = parse_summary(a)?;
            Ok(Report::new(
                "torus3 geometry",
                monodromy_inputs(a),
                json!({
                    "summary": to_value(&s),
                    "geometry": to_value(&geometry_classify(&s)),
                    "b1": s.b1(),
                }),
            ))
        }
        Torus3Cmd::Euler { genus, e, source } => {
            let r = euler_report(&bundle(*genus, *e, *source))?;
            Ok(Report::new(
                "torus3 euler",
                json!({ "genus": genus, "e": e, "source": format!("{source:?}").to_lowercase() }),
                to_value(&r),
            ))
        }
        Torus3Cmd::Periods { periods } => {
            let vecs: Vec<Vec<BigRational>> = periods
                .iter()
                .map(|p| parse_rational_vector(p).map_err(usage))
                .collect::<Result<_>>()?;
            let r = period_group_rank(&vecs)?;
            Ok(Report::new(
                "torus3 periods",
                json!({ "periods": periods }),
                to_value(&r),
            ))
        }
        Torus3Cmd::Report {
            monodromy,
            euler,
            base_genus,
        } => {
            let s = parse_summary(monodromy)?;
            let euler_data = match (euler, base_genus) {
                (Some(e), Some(g)) => Some(to_value(&euler_report(&bundle(
                    *g,
                    *e,
                    SourceArg::Surgery,
                ))?)),
                _ => None,
            };
            Ok(Report::new(
                "torus3 report",
                json!({
                    "monodromy": monodromy_inputs(monodromy),
                    "euler": euler,
                    "base_genus": base_genus,
                }),
                json!({
                    "summary": to_value(&s),
                    "geometry": to_value(&geometry_classify(&s)),
                    "b1": s.b1(),
                    "euler": euler_data,
                }),
            ))
        }
    }
}

fn bundle(genus: u32, e: i64, source: SourceArg) -> BundleData {
    BundleData {
        base_genus: genus,
        euler_class: e,
        source: match source {
            SourceArg::Suspension => BundleSource::Suspension,
            SourceArg::Surgery => BundleSource::Surgery,
        },
    }
}

fn parse_gens(s: &str) -> Result<Vec<CircleGen>> {
    let gens = hypleaf_core::holonomy::parse_generators(s).map_err(usage)?;
    if gens.is_empty() {
        return Err(usage("no generators given"));
    }
    Ok(gens)
}

fn env_seed() -> Result<u64> {
    match std::env::var("HYPLEAF_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("HYPLEAF_SEED={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn env_threads() -> Result<usize> {
    match std::env::var("HYPLEAF_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(usage(format!(
                "HYPLEAF_THREADS={s:?} is not a positive integer"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn as_affine(g: &CircleGen) -> Result<AffineMap> {
    match *g {
        CircleGen::AffineLine(a) => Ok(a),
        CircleGen::Doubling => Ok(AffineMap { k: 1, b: 0.0 }),
        CircleGen::Rotation { angle } => Ok(AffineMap { k: 0, b: angle }),
        CircleGen::Mobius(_) => Err(usage("stabilizer search takes affine generators only")),
    }
}

fn run_holonomy(c: &HolonomyCmd) -> Result<Report> {
    match c {
        HolonomyCmd::Orbit {
            gens,
            start,
            steps,
            eps,
            cells,
            random,
        } => {
            let g = parse_gens(gens)?;
            let seed = match random.seed {
                Some(s) => s,
                None => env_seed()?,
            };
            if *cells == 0 {
                return Err(usage("--cells must be positive"));
            }
            let cell_list: Vec<(u64, f64)> = (0..*cells as u64)
                .map(|i| (seed.wrapping_add(i), *start))
                .collect();
            let stats = orbit_cells(&g, &cell_list, *steps, *eps, env_threads()?)?;
            let rows: Vec<Value> = cell_list
                .iter()
                .zip(&stats)
                .map(|(&(s, x), st)| json!({ "seed": s, "start": x, "stats": to_value(st) }))
                .collect();
            let worst = stats.iter().map(|s| s.max_gap).fold(0.0, f64::max);
            Ok(Report::new(
                "holonomy orbit",
                json!({ "gens": gens, "start": start, "steps": steps, "eps": eps, "cells": cells }),
                json!({
                    "generators": g.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "cells": rows,
                    "max_gap": worst,
                    "epsilon_dense": worst < *eps,
                }),
            )
            .float(*eps)
            .seeded(seed))
        }
        HolonomyCmd::Stabilizer { gens, x, max_len } => {
            let affine: Vec<AffineMap> = parse_gens(gens)?
                .iter()
                .map(as_affine)
                .collect::<Result<_>>()?;
            let r = stabilizer_search(&affine, *x, *max_len)?;
            Ok(Report::new(
                "holonomy stabilizer",
                json!({ "gens": gens, "x": x, "max_len": max_len }),
                json!({
                    "generators": affine.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "report": to_value(&r),
                    "fixed_point_family": "x = b / (1 - 2^k) for k != 0",
                    "note": "only words up to max_len are examined; the full set of points with cyclic stabilizer is not enumerated",
                }),
            )
            .float(FIXED_TOLERANCE))
        }
        HolonomyCmd::Rotnum { gens, steps } => {
            let g = parse_gens(gens)?;
            let r = rotation_number(&g, *steps)?;
            Ok(Report::new(
                "holonomy rotnum",
                json!({ "gens": gens, "steps": steps }),
                to_value(&r),
            )
            .float(r.error_bound))
        }
        HolonomyCmd::Commutator { pairs, target } => {
            let parsed: Vec<(Mobius, Mobius)> = pairs
                .iter()
                .map(|p| {
                    let (f, h) = p
                        .split_once('|')
                        .ok_or_else(|| usage(format!("pair {p:?} needs 'F|H'")))?;
                    let mob = |s: &str| match s.parse::<CircleGen>().map_err(usage)? {
                        CircleGen::Mobius(m) => Ok(m),
                        CircleGen::Rotation { angle } => Ok(Mobius::rotation(angle)),
                        other => Err(usage(format!("{other} is not a Möbius map"))),
                    };
                    Ok((mob(f)?, mob(h)?))
                })
                .collect::<Result<_>>()?;
            let r = verify_commutator_product(&parsed, *target);
            Ok(Report::new(
                "holonomy commutator",
                json!({ "pairs": pairs, "target": target }),
                to_value(&r),
            )
            .float(r.tolerance))
        }
    }
}

fn run_pipeline(c: &PipelineCmd) -> Result<Report> {
    let PipelineCmd::Frw {
        matrix,
        origami,
        h,
        v,
        d,
        k,
    } = c;
    let o = match (origami, h, v) {
        (Some(name), None, None) => parse_origami(&OrigamiArgs {
            named: Some(name.clone()),
            h: None,
            v: None,
            d: None,
        })?,
        (None, Some(h), Some(v)) => origami_from_cycles(h, v, *d)?,
        _ => return Err(usage("give --origami NAME or both --h and --v")),
    };
    let m = parse_matrix(matrix)?;
    let class = classify(&m)?;
    let lambda = class
        .anosov()
        .map(|a| a.lambda)
        .ok_or(Error::NotAnosov(m.trace().abs()))?;
    let built = build(o.sigma_h().clone(), o.sigma_v().clone())?;
    let outcome = lift_automorphism(&m, &o)?;
    let LiftOutcome::Witness(w) = &outcome else {
        return Err(no_lift(&m));
    };
    let basis = homology_basis(&o)?;
    let action = induced_action_in(w, &basis)?;
    let torelli = torelli_order(&action.matrix, &basis.intersection_form)?;
    let g = built.genus;
    let monodromy_class = if g == 1 {
        MonodromyClass::Anosov { lambda }
    } else {
        MonodromyClass::PseudoAnosov { lambda }
    };
    let summary = MonodromySummary::new(g, monodromy_class, Some(torelli.k))?;
    let geometry = geometry_classify(&summary);

    // Ramification over the single branch point of the torus cover.
    let branched: Vec<u32> = built.stratum.iter().copied().filter(|&e| e > 1).collect();
    let growth = match branched.first() {
        None => {
            json!({ "certificate": null, "note": "unbranched cover: no branch points to accumulate" })
        }
        Some(&e) if branched.iter().all(|&x| x == e) => {
            let pair = (branched.len() as u32, e);
            let lg = leaf_genus_growth(o.degree() as u32, &[pair], *k)?;
            json!({ "certificate": to_value(&lg), "pair": [pair.0, pair.1] })
        }
        Some(_) => {
            json!({ "certificate": null, "note": "mixed ramification indices over the branch point" })
        }
    };
    let bound = 2 * g as usize - 2;
    Ok(Report::new(
        "pipeline frw",
        json!({ "matrix": matrix, "origami": origami, "h": h, "v": v, "d": d, "k": k }),
        json!({
            "classification": to_value(&class),
            "origami": origami_summary(&o),
            "lift": to_value(&outcome),
            "lift_verified": w.verify(&o),
            "homology": {
                "rank": basis.rank,
                "intersection_form": to_value(&basis.intersection_form),
                "action": to_value(&action),
            },
            "torelli": {
                "k": torelli.k,
                "b1": torelli.b1,
                "symplectic": torelli.symplectic,
                "bound": bound,
                "within_bound": torelli.k <= bound,
                "fixed_in_projection_kernel": action.fixed_in_projection_kernel,
            },
            "monodromy": to_value(&summary),
            "geometry": to_value(&geometry),
            "leaf_growth": growth,
        }),
    ))
}
