//! Command-line front end: parse a Cartan type and a weight, dispatch to
//! the engines, emit human-readable or JSON output.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on domain errors (with a
//! machine-readable JSON object on stderr).

use crate::base::cartan::CartanData;
use crate::base::weight::Weight;
use crate::character::{
    decomposition_multiplicities_cached, irreducible_character_full, verma_character,
    weyl_kac_character,
};
use crate::coxeter::{CoxeterElement, CoxeterSystem};
use crate::error::{Error, Result};
use crate::integral::{classify_chamber, compute_integral_system, ChamberClass};
use crate::kl::{kl_polynomial, KLCache, KLPoly};
use crate::shapovalov;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

const CACHE_MAGIC: &[u8; 4] = b"AKLC";
const CACHE_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "affkl",
    about = "characters of irreducible highest-weight modules over affine Lie algebras",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArgs {
    /// Cartan type, e.g. A1~ (untwisted affine) or A2 (finite)
    #[arg(long = "type", default_value = "A1~")]
    type_str: String,
    /// Cartan data from a JSON file instead of the built-in table
    #[arg(long)]
    cartan_file: Option<PathBuf>,
    /// Weight in the grammar h0=<rat>[+<rat>*t],h1=...,d=...
    #[arg(long)]
    weight: String,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the integral root subsystem of a weight
    Integral {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        json: bool,
    },
    /// Character of the irreducible module L(lambda), truncated
    Char {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 4)]
        depth: i64,
        #[arg(long, default_value_t = 16)]
        max_depth: i64,
        #[arg(long)]
        json: bool,
        /// Directory for the persistent KL memo (optional)
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Kazhdan-Lusztig polynomial table over a ball in the integral Weyl group
    Kl {
        #[command(flatten)]
        sys: SystemArgs,
        /// Ball radius
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Decomposition multiplicities of the linkage class of a weight
    Decomp {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 4)]
        depth: i64,
        #[arg(long, default_value_t = 16)]
        max_depth: i64,
        #[arg(long)]
        json: bool,
    },
    /// Shapovalov-form oracle: Gram size, rank, determinant at one offset
    Oracle {
        #[command(flatten)]
        sys: SystemArgs,
        /// Offset xi as comma-separated coordinates, e.g. "1,2"
        #[arg(long)]
        xi: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in invariant checks
    Selftest,
}

fn load_cartan(args: &SystemArgs) -> Result<Arc<CartanData>> {
    let data = match &args.cartan_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bad JSON in {}: {e}", path.display())))?;
            CartanData::from_json(&value)?
        }
        None => CartanData::from_type(&args.type_str)?,
    };
    Ok(Arc::new(data))
}

fn check_depth(depth: i64, max_depth: i64) -> Result<()> {
    if depth < 0 || depth > max_depth {
        return Err(Error::PreconditionViolated(format!(
            "depth {depth} outside 0..={max_depth} (raise --max-depth to go deeper)"
        )));
    }
    Ok(())
}

/// Entry point used by the binary and by tests. `argv` excludes the
/// program name.
pub fn run(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut full = vec!["affkl".to_string()];
    full.extend_from_slice(argv);
    let cli = match Cli::try_parse_from(&full) {
        Ok(c) => c,
        Err(e) => {
            // clap help/version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(err) => {
            let payload = serde_json::json!({
                "error": err.tag(),
                "message": err.to_string(),
            });
            let _ = writeln!(stderr, "{payload}");
            2
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let emit = |out: &mut dyn Write, s: String| -> Result<()> {
        writeln!(out, "{s}").map_err(|e| Error::Parse(format!("io error: {e}")))
    };
    match cli.command {
        Command::Integral { sys, json } => {
            let cartan = load_cartan(&sys)?;
            let lambda = Weight::parse(&cartan, &sys.weight)?;
            let system = compute_integral_system(&lambda, &cartan)?;
            if json {
                emit(out, system.to_json().to_string())?;
            } else {
                emit(out, format!("lambda = {}", lambda.format()))?;
                emit(out, format!("chamber: {:?}", classify_chamber(&system)))?;
                emit(out, format!("finite: {}", system.finite_flag))?;
                emit(
                    out,
                    format!(
                        "simples: {:?}",
                        system.simples.iter().map(|r| r.coords.clone()).collect::<Vec<_>>()
                    ),
                )?;
                emit(
                    out,
                    format!(
                        "zero-pairing roots: {:?}",
                        system.delta0.iter().map(|r| r.coords.clone()).collect::<Vec<_>>()
                    ),
                )?;
                emit(out, format!("coxeter matrix (0 = infinity): {:?}", system.coxeter_matrix))?;
            }
            Ok(())
        }
        Command::Char {
            sys,
            depth,
            max_depth,
            json,
            cache_dir,
        } => {
            check_depth(depth, max_depth)?;
            let cartan = load_cartan(&sys)?;
            let lambda = Weight::parse(&cartan, &sys.weight)?;
            let cache = KLCache::new();
            let loaded_fp = cache_fingerprint(&lambda, &cartan);
            if let Some(dir) = &cache_dir {
                load_cache(dir, &loaded_fp, &cache);
            }
            let result = irreducible_character_full(&lambda, depth, &cartan, &cache)?;
            if let Some(dir) = &cache_dir {
                save_cache(dir, &loaded_fp, &cache);
            }
            if json {
                let mut value = result.character.to_json();
                value["formula"] = serde_json::json!(result
                    .formula
                    .iter()
                    .map(|t| t.to_json())
                    .collect::<Vec<_>>());
                emit(out, value.to_string())?;
            } else {
                emit(out, format!("ch L({}) to depth {depth}:", lambda.format()))?;
                for (xi, c) in &result.character.coeffs {
                    emit(out, format!("  xi = {xi:?}: {c}"))?;
                }
                emit(out, "formula (sign * KL(1) * ch M(anchor)):".to_string())?;
                for t in &result.formula {
                    emit(
                        out,
                        format!(
                            "  y = {:?}, sign {}, value {}, anchor {}",
                            t.y_word,
                            t.sign,
                            t.kl_at_one,
                            t.anchor.format()
                        ),
                    )?;
                }
            }
            Ok(())
        }
        Command::Kl {
            sys,
            maxlen,
            json,
            cache_dir,
        } => {
            let cartan = load_cartan(&sys)?;
            let lambda = Weight::parse(&cartan, &sys.weight)?;
            let system = compute_integral_system(&lambda, &cartan)?;
            let cox = CoxeterSystem::new(&system);
            let cache = KLCache::new();
            if let Some(dir) = &cache_dir {
                load_cache(dir, &cox.fingerprint(), &cache);
            }
            let ball: Vec<CoxeterElement> = cox.enumerate_ball(maxlen).into_iter().flatten().collect();
            let mut rows = vec![];
            for y in &ball {
                for w in &ball {
                    if cox.bruhat_leq(y, w)? {
                        let p = kl_polynomial(&cox, &cache, y, w)?;
                        rows.push((y.word.clone(), w.word.clone(), p));
                    }
                }
            }
            if let Some(dir) = &cache_dir {
                save_cache(dir, &cox.fingerprint(), &cache);
            }
            if json {
                let value = serde_json::json!(rows
                    .iter()
                    .map(|(y, w, p)| serde_json::json!({
                        "y": y.iter().map(|&i| i as u64).collect::<Vec<_>>(),
                        "w": w.iter().map(|&i| i as u64).collect::<Vec<_>>(),
                        "poly": p.to_json(),
                    }))
                    .collect::<Vec<_>>());
                emit(out, value.to_string())?;
            } else {
                for (y, w, p) in rows {
                    emit(out, format!("P[{y:?} <= {w:?}] = {}", p.to_text()))?;
                }
            }
            Ok(())
        }
        Command::Decomp {
            sys,
            depth,
            max_depth,
            json,
        } => {
            check_depth(depth, max_depth)?;
            let cartan = load_cartan(&sys)?;
            let lambda = Weight::parse(&cartan, &sys.weight)?;
            let data = decomposition_multiplicities_cached(&lambda, depth, &cartan, &KLCache::new())?;
            if json {
                emit(out, data.to_json().to_string())?;
            } else {
                emit(
                    out,
                    format!(
                        "linkage class of {} (anchor {}, depth {depth})",
                        lambda.format(),
                        data.lambda_dominant.format()
                    ),
                )?;
                for (i, w) in data.reps.iter().enumerate() {
                    emit(out, format!("  rep {i}: word {:?}", w.word))?;
                }
                emit(out, format!("ch L over ch M: {:?}", data.coeff_lw))?;
                emit(out, format!("[M : L] multiplicities: {:?}", data.mult_ml))?;
            }
            Ok(())
        }
        Command::Oracle { sys, xi, json } => {
            let cartan = load_cartan(&sys)?;
            let lambda = Weight::parse(&cartan, &sys.weight)?;
            let coords: Vec<i64> = xi
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad offset entry `{s}`")))
                })
                .collect::<Result<_>>()?;
            if coords.len() != cartan.nodes {
                return Err(Error::Parse(format!(
                    "offset needs {} coordinates",
                    cartan.nodes
                )));
            }
            let gram = shapovalov::gram_matrix(&lambda, &coords, &cartan)?;
            let rank = shapovalov::rank(&gram);
            let det = shapovalov::determinant(&gram);
            if json {
                emit(
                    out,
                    serde_json::json!({
                        "xi": coords,
                        "size": gram.len(),
                        "rank": rank,
                        "determinant": det.to_string(),
                    })
                    .to_string(),
                )?;
            } else {
                emit(out, format!("weight space at xi = {coords:?}"))?;
                emit(out, format!("gram size: {}", gram.len()))?;
                emit(out, format!("rank: {rank}"))?;
                emit(out, format!("determinant: {det}"))?;
            }
            Ok(())
        }
        Command::Selftest => selftest(out),
    }
}

fn cache_fingerprint(lambda: &Weight, cartan: &Arc<CartanData>) -> String {
    match compute_integral_system(lambda, cartan) {
        Ok(sys) => CoxeterSystem::new(&sys).fingerprint(),
        Err(_) => format!("{}|{}", cartan.type_str, lambda.format()),
    }
}

fn cache_path(dir: &Path) -> PathBuf {
    dir.join("kl-cache.bin")
}

/// Versioned binary memo file: magic, version, then a JSON payload mapping
/// system fingerprints to P-polynomial entries. A missing or mismatched
/// file is ignored.
fn load_cache(dir: &Path, fingerprint: &str, cache: &KLCache) {
    let path = cache_path(dir);
    let Ok(bytes) = std::fs::read(&path) else { return };
    if bytes.len() < 8 || &bytes[0..4] != CACHE_MAGIC {
        return;
    }
    let version = u32::from_le_bytes([bytes[4], bytes[5], bytes[6], bytes[7]]);
    if version != CACHE_VERSION {
        return;
    }
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(&bytes[8..]) else {
        return;
    };
    let Some(entries) = value.get(fingerprint).and_then(|v| v.as_array()) else {
        return;
    };
    let mut loaded = vec![];
    for e in entries {
        let (Some(y), Some(w), Some(c)) = (
            e.get("y").and_then(|v| v.as_array()),
            e.get("w").and_then(|v| v.as_array()),
            e.get("p").and_then(|v| v.as_array()),
        ) else {
            continue;
        };
        let y: Vec<u8> = y.iter().filter_map(|x| x.as_u64().map(|v| v as u8)).collect();
        let w: Vec<u8> = w.iter().filter_map(|x| x.as_u64().map(|v| v as u8)).collect();
        let coeffs: Vec<BigInt> = c
            .iter()
            .filter_map(|x| x.as_i64().map(BigInt::from))
            .collect();
        loaded.push(((y, w), KLPoly { coeffs }));
    }
    cache.preload_p(loaded);
}

fn save_cache(dir: &Path, fingerprint: &str, cache: &KLCache) {
    let path = cache_path(dir);
    let mut root: serde_json::Value = std::fs::read(&path)
        .ok()
        .filter(|b| b.len() >= 8 && &b[0..4] == CACHE_MAGIC)
        .and_then(|b| serde_json::from_slice(&b[8..]).ok())
        .unwrap_or_else(|| serde_json::json!({}));
    let entries: Vec<serde_json::Value> = cache
        .p_entries()
        .into_iter()
        .map(|((y, w), p)| {
            serde_json::json!({
                "y": y.iter().map(|&i| i as u64).collect::<Vec<_>>(),
                "w": w.iter().map(|&i| i as u64).collect::<Vec<_>>(),
                "p": p.to_json(),
            })
        })
        .collect();
    root[fingerprint] = serde_json::json!(entries);
    let mut bytes = Vec::new();
    bytes.extend_from_slice(CACHE_MAGIC);
    bytes.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    bytes.extend_from_slice(root.to_string().as_bytes());
    if std::fs::create_dir_all(dir).is_ok() {
        let _ = std::fs::write(&path, bytes);
    }
}

/// Quick invariant suite exercising each engine once.
fn selftest(out: &mut dyn Write) -> Result<()> {
    let mut ok = |name: &str| {
        let _ = writeln!(out, "ok {name}");
    };
    let cartan = Arc::new(CartanData::from_type("A1~")?);
    let zero = Weight::zero(&cartan);

    // integral system of the zero weight
    let sys = compute_integral_system(&zero, &cartan)?;
    if sys.simples.len() != 2 || classify_chamber(&sys) != ChamberClass::CPlus {
        return Err(Error::PreconditionViolated("integral selftest failed".into()));
    }
    ok("integral system at lambda = 0");

    // KL inversion identity on a small ball
    let cox = CoxeterSystem::new(&sys);
    let cache = KLCache::new();
    let ball: Vec<CoxeterElement> = cox.enumerate_ball(5).into_iter().flatten().collect();
    for x in &ball {
        for z in &ball {
            if cox.bruhat_leq(x, z)? {
                let r = crate::kl::inversion_residual(&cox, &cache, x, z)?;
                if !r.is_zero() {
                    return Err(Error::PreconditionViolated(
                        "KL inversion identity failed".into(),
                    ));
                }
            }
        }
    }
    ok("KL inversion identity on the dihedral ball");

    // trivial module via two independent routes
    let kl_route = irreducible_character_full(&zero, 4, &cartan, &cache)?.character;
    let wk_route = weyl_kac_character(&zero, 4, &cartan)?;
    if kl_route != wk_route || kl_route.coeffs.len() != 1 {
        return Err(Error::PreconditionViolated("character selftest failed".into()));
    }
    ok("trivial module by two routes");

    // Shapovalov oracle against the character engine
    let minus2rho = Weight::parse(&cartan, "h0=-2,h1=-2,d=0")?;
    let ch = verma_character(&minus2rho, 2, &cartan);
    for (xi, c) in &ch.coeffs {
        let dim = shapovalov::irreducible_dim(&minus2rho, xi, &cartan)? as i64;
        if dim != *c {
            return Err(Error::PreconditionViolated("oracle selftest failed".into()));
        }
    }
    ok("Shapovalov oracle on the antidominant Verma");
    Ok(())
}
