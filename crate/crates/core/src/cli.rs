//! The `kdual` command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde_json::json;

use crate::doc::Document;
use crate::drezet::{self, Dyadic};
use crate::dualitylab::{self, ExperimentConfig};
use crate::error::{Error, Result};
use crate::exactla::{format_rational, parse_rational};
use crate::quiver::{
    c_pair, c_pair_kron, reflect, reflect_inverse, semistable_certificate, ProbeConfig,
    StabilityStatus, Weight, Witness,
};
use crate::selftest::{self, Scale};
use crate::sheafbridge::{
    coh_twist, ddual, h0_tensor, hom_to_o, in_chart, strata_index, support_curve, BundleRep,
    Pencil,
};

#[derive(Parser, Debug)]
#[command(name = "kdual", version, about = "Kronecker-quiver pairings, reflections and sheaf oracles")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Pairing c(V,W) of two rep documents; adds C(V,W) and the cohomology oracle when they apply
    Pair { v: PathBuf, w: PathBuf },
    /// Reflect a rep document
    Reflect {
        v: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse reflection of a rep document
    Unreflect {
        v: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stability certificate for a rep
    Stable {
        v: PathBuf,
        /// Weight as w1,w2; defaults to the primitive weight vanishing on dim V
        #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
        weight: Option<Weight>,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        /// Largest multiple of the basic probe dimension vector to try
        #[arg(long, default_value_t = 2)]
        probes: usize,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long)]
        seed: u64,
    },
    /// Support curve det(xB_x + yB_y + zB_z) of a pencil
    Curve {
        w: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transposed pencil presenting the dual sheaf
    Ddual {
        w: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strata index of a bundle rep, or a census of random ones
    Strata {
        v: Option<PathBuf>,
        #[arg(long)]
        census: Option<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohomology of G(k), or h0/h1 of G tensor F for a pencil
    Coh {
        v: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        #[arg(long = "with")]
        with: Option<PathBuf>,
    },
    /// Exceptional slope eps(x) of a dyadic rational
    Eps { x: String },
    /// Drezet's delta(mu)
    Delta {
        #[arg(allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value_t = drezet::DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Height of M(r, c1, c2)
    Height {
        r: i64,
        #[arg(allow_hyphen_values = true)]
        c1: i64,
        #[arg(allow_hyphen_values = true)]
        c2: i64,
    },
    /// Whether M(r, c1, c2) has positive dimension
    Posdim {
        r: i64,
        #[arg(allow_hyphen_values = true)]
        c1: i64,
        #[arg(allow_hyphen_values = true)]
        c2: i64,
    },
    /// Run a config document (experiment: pairing | vanishing | strata | coeff_span)
    Experiment {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print a plain-text summary
        #[arg(long)]
        table: bool,
    },
    /// Run the acceptance suite
    Selftest {
        #[arg(long)]
        quick: bool,
    },
}

fn parse_weight(s: &str) -> std::result::Result<Weight, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("weight must be w1,w2, got {s:?}"))?;
    let w1 = a.trim().parse().map_err(|_| format!("bad weight component {a:?}"))?;
    let w2 = b.trim().parse().map_err(|_| format!("bad weight component {b:?}"))?;
    Ok(Weight::new(w1, w2))
}

fn read_doc(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::contract(format!("cannot read {}: {e}", path.display())))?;
    Document::parse(&text)
}

fn emit(doc: &Document, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let text = doc.to_json();
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::contract(format!("cannot write {}: {e}", p.display()))),
        None => write_out(stdout, &text),
    }
}

fn write_out(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes())
        .map_err(|e| Error::contract(format!("cannot write output: {e}")))
}

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {
        write_out($out, &format!("{}\n", format!($($arg)*)))
    };
}

fn pair(v: &Path, w: &Path, out: &mut dyn Write) -> Result<()> {
    let v = read_doc(v)?.into_rep()?;
    let w = read_doc(w)?.into_rep()?;
    let c = c_pair(&v, &w)?;
    outln!(out, "{}", format_rational(&c))?;
    let kron_shapes = v.q() == 3
        && w.q() == 3
        && v.dim().a2 == 2 * v.dim().a1
        && w.dim().a1 == w.dim().a2
        && w.dim().a1 > 0
        && v.dim().a1 > 0;
    if !kron_shapes {
        return Ok(());
    }
    let Ok(k) = c_pair_kron(&v, &w) else {
        return Ok(());
    };
    outln!(out, "big={} compact={}", format_rational(&k.big), format_rational(&k.compact))?;
    let pencil = Pencil::from_rep(&w)?;
    if let (Ok(b), true) = (BundleRep::from_rep(&v), in_chart(&pencil)) {
        let (h0, h1) = h0_tensor(&b, &pencil)?;
        outln!(out, "h0={h0} h1={h1}")?;
        if k.compact.is_zero() != (h0 > 0) {
            return Err(Error::invariant("pairing and cohomology oracle disagree"));
        }
    }
    Ok(())
}

fn stable(
    v: &Path,
    weight: Option<Weight>,
    cfg: ProbeConfig,
    out: &mut dyn Write,
) -> Result<()> {
    let v = read_doc(v)?.into_rep()?;
    let sigma = weight.unwrap_or_else(|| Weight::canonical_for(v.dim()));
    let verdict = semistable_certificate(&v, sigma, &cfg)?;
    let status = match verdict.status {
        StabilityStatus::Semistable => "semistable",
        StabilityStatus::Stable => "stable",
        StabilityStatus::Unstable => "unstable",
        StabilityStatus::Unknown => "unknown",
    };
    outln!(out, "{status}")?;
    outln!(out, "weight ({},{})", sigma.w1, sigma.w2)?;
    match verdict.witness {
        Some(Witness::Pairing { probe, side, value }) => {
            outln!(out, "probe {:?} dim {} value {}", side, probe.dim(), format_rational(&value))?;
        }
        Some(Witness::Subrep(d)) => {
            outln!(out, "subrep dim {} weight {}", d.dim, sigma.eval(d.dim))?;
        }
        None => {}
    }
    Ok(())
}

fn experiment(path: &Path, out_path: Option<&Path>, table: bool, out: &mut dyn Write) -> Result<()> {
    let (kind, cfg): (String, ExperimentConfig) = match read_doc(path)? {
        Document::Config { experiment, config } => (experiment, config),
        other => {
            return Err(Error::contract(format!(
                "expected a config document, got {:?}",
                other.kind()
            )))
        }
    };
    let value = match kind.as_str() {
        "pairing" => {
            let (_, r) = dualitylab::pairing_matrix(&cfg)?;
            if table {
                write_out(out, &dualitylab::pairing_table(&r))?;
            }
            json!({ "report": "pairing", "result": r })
        }
        "vanishing" => {
            let r = dualitylab::vanishing_oracle_experiment(&cfg)?;
            if table {
                write_out(out, &dualitylab::pairing_table(&r))?;
            }
            json!({ "report": "vanishing", "result": r })
        }
        "strata" => {
            let r = dualitylab::strata_census(cfg.n, cfg.samples_v, cfg.seed)?;
            json!({ "report": "strata", "result": r })
        }
        "coeff_span" => {
            let s = dualitylab::coeff_span_dim(cfg.d, cfg.samples_v, cfg.seed)?;
            json!({ "report": "coeff_span", "result": { "d": cfg.d, "samples": cfg.samples_v, "seed": cfg.seed, "span": s } })
        }
        other => return Err(Error::contract(format!("unknown experiment {other:?}"))),
    };
    emit(&Document::Report(value), out_path, out)
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Pair { v, w } => pair(&v, &w, out)?,
        Cmd::Reflect { v, out: o } => {
            let r = reflect(&read_doc(&v)?.into_rep()?)?;
            emit(&Document::Rep(r), o.as_deref(), out)?;
        }
        Cmd::Unreflect { v, out: o } => {
            let r = reflect_inverse(&read_doc(&v)?.into_rep()?)?;
            emit(&Document::Rep(r), o.as_deref(), out)?;
        }
        Cmd::Stable {
            v,
            weight,
            trials,
            probes,
            bound,
            seed,
        } => {
            let cfg = ProbeConfig {
                trials,
                max_multiple: probes,
                seed,
                bound,
            };
            stable(&v, weight, cfg, out)?;
        }
        Cmd::Curve { w, out: o } => {
            let p = Pencil::from_rep(&read_doc(&w)?.into_rep()?)?;
            let c = support_curve(&p);
            match o {
                Some(path) => emit(&Document::Poly(c.clone()), Some(&path), out)?,
                None => outln!(out, "{c}")?,
            }
        }
        Cmd::Ddual { w, out: o } => {
            let p = Pencil::from_rep(&read_doc(&w)?.into_rep()?)?;
            emit(&Document::Pencil(ddual(&p)), o.as_deref(), out)?;
        }
        Cmd::Strata {
            v,
            census,
            samples,
            seed,
            out: o,
        } => match (v, census) {
            (Some(path), None) => {
                let b = BundleRep::from_rep(&read_doc(&path)?.into_rep()?)?;
                let idx = strata_index(&b)?;
                let hom = hom_to_o(&b);
                outln!(out, "{idx}")?;
                outln!(out, "hom_to_O={hom}")?;
                if idx != hom {
                    return Err(Error::invariant("strata index differs from hom(G, O)"));
                }
            }
            (None, Some(n)) => {
                let seed = seed.ok_or_else(|| Error::contract("--census needs an explicit --seed"))?;
                let r = dualitylab::strata_census(n, samples, seed)?;
                let doc = Document::Report(json!({ "report": "strata", "result": r }));
                emit(&doc, o.as_deref(), out)?;
            }
            _ => return Err(Error::contract("give either a bundle file or --census N")),
        },
        Cmd::Coh { v, twist, with } => {
            let b = BundleRep::from_rep(&read_doc(&v)?.into_rep()?)?;
            match (twist, with) {
                (Some(k), None) => {
                    let p = coh_twist(&b, k)?;
                    outln!(out, "{} {} {}", p.h0, p.h1, p.h2)?;
                }
                (None, Some(w)) => {
                    let p = Pencil::from_rep(&read_doc(&w)?.into_rep()?)?;
                    let (h0, h1) = h0_tensor(&b, &p)?;
                    outln!(out, "h0={h0} h1={h1}")?;
                }
                _ => return Err(Error::contract("give exactly one of --twist or --with")),
            }
        }
        Cmd::Eps { x } => {
            let e = drezet::eps(&Dyadic::parse(&x)?);
            outln!(out, "slope {}", format_rational(&e.slope))?;
            outln!(out, "rank {}", e.rank)?;
            outln!(out, "discriminant {}", format_rational(&e.discriminant))?;
        }
        Cmd::Delta { mu, depth } => {
            let mu = parse_rational(&mu)?;
            let a = drezet::assoc_exceptional(&mu, depth)?;
            outln!(out, "{}", format_rational(&drezet::delta_with_depth(&mu, depth)?))?;
            outln!(out, "exceptional {} rank {}", format_rational(&a.slope), a.rank)?;
        }
        Cmd::Height { r, c1, c2 } => {
            let h = drezet::height(r, c1, c2)?;
            if h != drezet::height_chi_crosscheck(r, c1, c2)? {
                return Err(Error::invariant("height forms disagree"));
            }
            outln!(out, "{}", format_rational(&h))?;
        }
        Cmd::Posdim { r, c1, c2 } => {
            outln!(out, "{}", drezet::positive_dim(r, c1, c2)?)?;
        }
        Cmd::Experiment { config, out: o, table } => experiment(&config, o.as_deref(), table, out)?,
        Cmd::Selftest { quick } => {
            let scale = if quick { Scale::Quick } else { Scale::Full };
            let results = selftest::run_all(scale, out);
            let failed = results.iter().filter(|r| !r.passed).count();
            outln!(out, "{} passed, {failed} failed", results.len() - failed)?;
            if failed > 0 {
                return Ok(3);
            }
        }
    }
    Ok(0)
}

/// Runs the tool on `argv` (including the program name), writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
