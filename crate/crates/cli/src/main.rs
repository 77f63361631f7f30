use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use dissecta::dissection::{self, chamber_statistic, Corollary, FConvention, FaceProfile};
use dissecta::io::{PosetDoc, ProfileDoc, SetModelDoc, SubsetDoc, DEFAULT_MAX_ELEMENTS};
use dissecta::lattice::{
    cancellation_witness, distributivity_witness, join_irreducibles, modularity_witness,
};
use dissecta::report::{Rendering, Report, Value};
use dissecta::valuation::{n_presentation, val_invariants, zaslavsky_check_with};
use dissecta::{IncidenceFunction, Lattice, Poset, Rational64};

const MAX_ELEMENTS_VAR: &str = "DISSECTA_MAX_ELEMENTS";

#[derive(Parser)]
#[command(
    name = "dissecta",
    version,
    about = "Möbius functions, lattice valuations and arrangement dissection"
)]
struct Cli {
    /// Output rendering.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Dim,
    Codim,
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Cor68,
    Cor69,
}

#[derive(Subcommand)]
enum Command {
    /// Möbius function of a poset, or a single value μ(A, B).
    Mobius {
        poset: PathBuf,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Lattice, distributivity, modularity and cancellation flags.
    Check { poset: PathBuf },
    /// Join-irreducible elements of a lattice.
    Ji { poset: PathBuf },
    /// Rank and torsion of the valuation module; optionally checks u_M(a) ∈ N(L).
    Val {
        poset: PathBuf,
        #[arg(long = "check-zaslavsky", value_name = "M-FILE")]
        check_zaslavsky: Option<PathBuf>,
    },
    /// Chamber sum of an arrangement and, given c, the chamber count.
    Dissect {
        arrangement: PathBuf,
        #[arg(long = "chamber-chi", allow_hyphen_values = true)]
        chamber_chi: Option<i64>,
    },
    /// Face counts by dimension.
    Faces {
        arrangement: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// f-polynomial under one of three exponent conventions.
    Fpoly {
        arrangement: PathBuf,
        #[arg(long, value_enum)]
        convention: Convention,
        /// Defaults to c_i = (-1)^i.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Möbius polynomial M(x, y).
    Mpoly { arrangement: PathBuf },
    /// Checks the dissection identity on a finite set model.
    Verify { model: PathBuf },
    /// Checks a closed form of the literal f-polynomial against M(x, y).
    Identity {
        arrangement: PathBuf,
        #[arg(long, value_enum)]
        corollary: Which,
    },
}

enum Failure {
    /// Bad input: exit 1.
    Invalid(String),
    /// A checked identity does not hold: the report is still printed, exit 2.
    Identity(Report),
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

struct Session {
    cap: usize,
    report: Report,
}

impl Session {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
        self.report.input(
            &path.display().to_string(),
            hex::encode(Sha256::digest(&bytes)),
        );
        String::from_utf8(bytes)
            .map_err(|_| Failure::Invalid(format!("{}: not UTF-8", path.display())))
    }

    fn poset(&mut self, path: &Path) -> Result<Poset, Failure> {
        let text = self.read(path)?;
        Ok(PosetDoc::parse(&text)?.to_poset(self.cap)?)
    }

    fn lattice(&mut self, path: &Path) -> Result<Lattice, Failure> {
        Ok(Lattice::from_poset(Arc::new(self.poset(path)?))?)
    }

    fn arrangement(&mut self, path: &Path) -> Result<dissecta::ArrangementPoset, Failure> {
        let text = self.read(path)?;
        Ok(PosetDoc::parse(&text)?.to_arrangement(self.cap)?)
    }

    fn profile(&mut self, path: &Path) -> Result<FaceProfile, Failure> {
        let text = self.read(path)?;
        Ok(ProfileDoc::parse(&text)?.to_profile()?)
    }
}

fn max_elements() -> Result<usize, Failure> {
    match std::env::var(MAX_ELEMENTS_VAR) {
        Err(_) => Ok(DEFAULT_MAX_ELEMENTS),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Invalid(format!("{MAX_ELEMENTS_VAR}={v} is not a size"))),
    }
}

fn ids(p: &Poset, items: impl IntoIterator<Item = usize>) -> Value {
    Value::List(items.into_iter().map(|a| Value::from(p.id(a))).collect())
}

fn witness(p: &Poset, w: Option<(usize, usize, usize)>) -> Option<Value> {
    w.map(|(a, b, c)| ids(p, [a, b, c]))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let cap = max_elements()?;
    let name = match &cli.command {
        Command::Mobius { .. } => "mobius",
        Command::Check { .. } => "check",
        Command::Ji { .. } => "ji",
        Command::Val { .. } => "val",
        Command::Dissect { .. } => "dissect",
        Command::Faces { .. } => "faces",
        Command::Fpoly { .. } => "fpoly",
        Command::Mpoly { .. } => "mpoly",
        Command::Verify { .. } => "verify",
        Command::Identity { .. } => "identity",
    };
    let mut s = Session {
        cap,
        report: Report::new(name),
    };
    let mut failed = false;
    match &cli.command {
        Command::Mobius { poset, from, to } => {
            let p = Arc::new(s.poset(poset)?);
            let mu = IncidenceFunction::mobius(&p)?;
            if let (Some(a), Some(b)) = (from, to) {
                let (ia, ib) = (p.index_of(a)?, p.index_of(b)?);
                if !p.leq(ia, ib) {
                    return Err(Failure::Invalid(format!("`{a}` is not below `{b}`")));
                }
                s.report.set("from", a.as_str());
                s.report.set("to", b.as_str());
                s.report.set("mu", mu.get(ia, ib));
            } else {
                let entries: Vec<Value> = mu
                    .entries()
                    .into_iter()
                    .filter(|&(_, _, m)| m != 0)
                    .map(|(a, b, m)| {
                        Value::record([
                            ("from", Value::from(p.id(a))),
                            ("to", Value::from(p.id(b))),
                            ("mu", Value::from(m)),
                        ])
                    })
                    .collect();
                s.report.set("elements", p.len());
                s.report.set("nonzero", entries.len());
                s.report.set("mu", Value::List(entries));
            }
        }
        Command::Check { poset } => {
            let p = Arc::new(s.poset(poset)?);
            s.report.set("elements", p.len());
            match Lattice::from_poset(Arc::clone(&p)) {
                Err(e) => {
                    s.report.set("lattice", false);
                    s.report.set("reason", e.to_string());
                }
                Ok(l) => {
                    let flags = l.flags();
                    s.report.set("lattice", true);
                    s.report.set("distributive", flags.distributive);
                    s.report.set("modular", flags.modular);
                    s.report.set("cancellation", flags.cancellation);
                    let mut witnesses = BTreeMap::new();
                    for (key, w) in [
                        ("distributive", distributivity_witness(&l)),
                        ("modular", modularity_witness(&l)),
                        ("cancellation", cancellation_witness(&l)),
                    ] {
                        if let Some(v) = witness(&p, w) {
                            witnesses.insert(key.to_owned(), v);
                        }
                    }
                    if !witnesses.is_empty() {
                        s.report.set("witnesses", Value::Record(witnesses));
                    }
                }
            }
        }
        Command::Ji { poset } => {
            let l = s.lattice(poset)?;
            let p = l.poset();
            let ji = join_irreducibles(&l)?;
            s.report.set("ji", ids(p, ji.elements.iter().copied()));
            s.report.set("count", ji.elements.len());
            let covers: BTreeMap<String, Value> = ji
                .elements
                .iter()
                .filter_map(|&a| {
                    ji.lower_cover[a].map(|c| (p.id(a).to_owned(), Value::from(p.id(c))))
                })
                .collect();
            s.report.set("lower_cover", Value::Record(covers));
        }
        Command::Val {
            poset,
            check_zaslavsky,
        } => {
            let l = s.lattice(poset)?;
            let p = Arc::clone(l.poset());
            let inv = val_invariants(&l)?;
            let pres = n_presentation(&l);
            s.report.set("elements", l.len());
            s.report.set("generators", pres.pairs().len());
            s.report.set("n_rank", pres.rank());
            s.report.set("free_rank", inv.free_rank);
            s.report.set("torsion", inv.torsion.clone());
            s.report.set("ji_count", inv.ji_count);
            s.report.set("distributive", inv.distributive);
            s.report.set("matches", inv.matches);
            if !inv.matches {
                s.report
                    .warn("the free rank differs from |ji| or there is torsion");
                failed = true;
            }
            if let Some(m_path) = check_zaslavsky {
                let text = s.read(m_path)?;
                let members = SubsetDoc::parse(&text)?.to_bitset(&p)?;
                let verdicts = zaslavsky_check_with(&pres, &members)?;
                let all = verdicts.iter().all(|&(_, ok)| ok);
                let list: Vec<Value> = verdicts
                    .into_iter()
                    .map(|(a, ok)| {
                        Value::record([
                            ("element", Value::from(p.id(a))),
                            ("in_n", Value::from(ok)),
                        ])
                    })
                    .collect();
                s.report.set("zaslavsky", Value::List(list));
                s.report.set("zaslavsky_holds", all);
                failed |= !all;
            }
        }
        Command::Dissect {
            arrangement,
            chamber_chi,
        } => {
            let ap = s.arrangement(arrangement)?;
            let stat = chamber_statistic(&ap, *chamber_chi)?;
            s.report.set("flats", ap.len());
            s.report.set("top", ap.poset().id(ap.top()));
            s.report.set("sum", stat.sum);
            if let Some(count) = stat.count {
                s.report.set("count", count);
                s.report.set("integral", stat.is_integral());
                if !stat.is_integral() {
                    s.report.warn(format!(
                        "chamber count {count} is not an integer; the χ data are inconsistent"
                    ));
                }
            }
        }
        Command::Faces {
            arrangement,
            profile,
        } => {
            let ap = s.arrangement(arrangement)?;
            let profile = s.profile(profile)?;
            let counts = dissection::face_counts(&ap, &profile)?;
            let total: Rational64 = counts.values().sum();
            for (k, f) in &counts {
                if !f.is_integer() {
                    s.report.warn(format!("f_{k} = {f} is not an integer"));
                }
            }
            let record: BTreeMap<String, Value> = counts
                .into_iter()
                .map(|(k, f)| (k.to_string(), Value::from(f)))
                .collect();
            s.report.set("faces", Value::Record(record));
            s.report.set("total", total);
        }
        Command::Fpoly {
            arrangement,
            convention,
            profile,
        } => {
            let ap = s.arrangement(arrangement)?;
            let profile = match profile {
                Some(path) => s.profile(path)?,
                None => FaceProfile::alternating(ap.ambient_dim()?),
            };
            let (conv, label) = match convention {
                Convention::Dim => (FConvention::Dim, "dim"),
                Convention::Codim => (FConvention::Codim, "codim"),
                Convention::Literal => (FConvention::Literal, "literal"),
            };
            let f = dissection::f_polynomial(&ap, &profile, conv)?;
            s.report.set("convention", label);
            s.report.set("at_one", f.eval(Rational64::from_integer(1)));
            s.report.set("f", f);
        }
        Command::Mpoly { arrangement } => {
            let ap = s.arrangement(arrangement)?;
            s.report.set("rank", ap.arrangement_rank()? as i64);
            s.report.set("ambient_dim", ap.ambient_dim()? as i64);
            s.report.set("m", dissection::mobius_polynomial(&ap)?);
        }
        Command::Verify { model } => {
            let text = s.read(model)?;
            let (model, f) = SetModelDoc::parse(&text)?.to_model(s.cap)?;
            let r = dissection::set_oracle_check(&model, &f)?;
            s.report.set("ground", model.points().len());
            s.report.set(
                "valuation",
                match f {
                    dissection::SetValuation::Cardinality => "cardinality",
                    dissection::SetValuation::PointWeights(_) => "weights",
                },
            );
            s.report.set("lhs", r.lhs);
            s.report.set("rhs", r.rhs);
            s.report.set("equal", r.equal);
            match &r.d_lattice {
                Some(d) => {
                    let mut rec = vec![
                        ("size", Value::from(d.size)),
                        ("ji_ok", Value::from(d.ji_ok)),
                    ];
                    if let Some(z) = d.zero_sum {
                        rec.push(("zero_sum", Value::from(z)));
                    }
                    s.report.set("d_lattice", Value::record(rec));
                }
                None => s.report.warn(format!(
                    "ground set exceeds {} points; D(L) not materialized",
                    dissection::D_LATTICE_GROUND_LIMIT
                )),
            }
            failed = !r.holds();
        }
        Command::Identity {
            arrangement,
            corollary,
        } => {
            let ap = s.arrangement(arrangement)?;
            let which = match corollary {
                Which::Cor68 => Corollary::Cor68,
                Which::Cor69 => Corollary::Cor69,
            };
            let r = dissection::identity_report(&ap, which)?;
            s.report.set("corollary", which.name());
            s.report.set("lhs", r.lhs.clone());
            s.report.set("rhs", r.rhs.clone());
            s.report.set("equal", r.equal);
            s.report.set("lhs_at_one", r.lhs_at_one);
            s.report.set("total_faces", r.total_faces);
            failed = !r.holds();
        }
    }
    if failed {
        Err(Failure::Identity(s.report))
    } else {
        Ok(s.report)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let rendering = match cli.format {
        Format::Text => Rendering::Text,
        Format::Json => Rendering::Json,
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(rendering));
            ExitCode::SUCCESS
        }
        Err(Failure::Identity(report)) => {
            print!("{}", report.render(rendering));
            eprintln!("error: identity check failed");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
