mod records;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;
use tradeforge::anf::kasami_classify;
use tradeforge::construct::{
    known_simple_spectrum, minimal_trade, spectrum_trade, vol3_template, vol6_template, LegParity, ParityLegSpan,
    SpectrumFamily, Vol6Template,
};
use tradeforge::enumerate::{
    double_count_check, split_unitrade, table_report, EnumerationConfig, Enumerator, LevelSpec, SplitOutcome,
};
use tradeforge::gf2span::trade_affine_rank;
use tradeforge::{canonical_form, Block, SignedTrade, TradeError};

use records::{read_lines, write_line, TradeRecord, UnitradeRecord};

const EXIT_ERROR: u8 = 1;
const EXIT_ABORTED: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "tradeforge", version, about = "Enumerate, verify and classify small [t]-trades")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all classes of [t]-trades on v elements up to a volume.
    Enumerate {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        max_vol: u64,
        /// Trade records, one class representative per line; a summary is
        /// written next to it with a `.summary.json` suffix.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, env = "TRADEFORGE_BUDGET")]
        budget: Option<u64>,
    },
    /// Print the class-count grid "all(non-degenerate) simple(non-degenerate)".
    Tables {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        v_max: usize,
        /// Defaults to 2^(t+1) - 1.
        #[arg(long)]
        max_vol: Option<u64>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, env = "TRADEFORGE_BUDGET")]
        budget: Option<u64>,
    },
    /// Check that every trade record is a [t]-trade.
    Verify {
        #[arg(long)]
        t: usize,
        file: PathBuf,
    },
    /// Volume, foundation, affine rank, flags and affine class per record.
    Classify {
        /// Strength used for the affine class; defaults to each trade's strength.
        #[arg(long)]
        t: Option<usize>,
        /// Print blocks as 0/1 tuples, element 1 leftmost.
        #[arg(long)]
        pretty: bool,
        file: PathBuf,
    },
    /// Write an explicit trade.
    Construct {
        #[command(subcommand)]
        family: ConstructCmd,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Canonical key and automorphism count per record.
    Canon { file: PathBuf },
    /// Look for a signing of each unitrade record that is a simple [t]-trade.
    Split {
        #[arg(long)]
        t: usize,
        #[arg(long, env = "TRADEFORGE_BUDGET")]
        budget: Option<u64>,
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Simple trade of volume 2^(t+1)+2^(t-1)-2^i (ii) or -3·2^i (iii).
    Spectrum {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        family: SpectrumFamily,
    },
    /// Volumes known to occur / not occur for simple [t]-trades below 2.5·2^t.
    KnownSpectrum {
        #[arg(long)]
        t: usize,
    },
    /// X0 (X1 - Y1) ... (Xk - Yk), masks given as `X:Y`.
    Minimal {
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = 0)]
        x0: u32,
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
    },
    /// Shift of ({Y1,Y2,Y3},{Z1,Z2,Z3}); masks comma-separated.
    Vol3 {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 0)]
        shift: u32,
    },
    /// Volume-6 [2]-trade of kind P3-3, P2-2, P1-3 or P1-1.
    Vol6 {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = 0)]
        x: u32,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
    /// Linear span of the generators, legs split by weight parity.
    ParitySpan {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        gens: String,
        #[arg(long)]
        parity: LegParity,
    },
}

/// An error that maps to a specific exit status.
struct Exit(u8);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(Exit(code)) = e.downcast_ref::<Exit>() {
                return ExitCode::from(*code);
            }
            eprintln!("error: {e:#}");
            let aborted = e.chain().any(|c| matches!(c.downcast_ref::<TradeError>(), Some(TradeError::EnumerationAborted { .. })));
            ExitCode::from(if aborted { EXIT_ABORTED } else { EXIT_ERROR })
        }
    }
}

impl std::fmt::Debug for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::error::Error for Exit {}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Enumerate { t, v, max_vol, out, jobs, budget } => cmd_enumerate(t, v, max_vol, &out, jobs, budget),
        Command::Tables { t, v_max, max_vol, jobs, budget } => {
            let cap = max_vol.unwrap_or((1u64 << (t + 1)) - 1);
            let mut e = Enumerator::new(EnumerationConfig { jobs, budget });
            let report = table_report(&mut e, t, v_max, cap);
            print!("{report}");
            if report.is_complete() {
                Ok(())
            } else {
                Err(Exit(EXIT_ABORTED).into())
            }
        }
        Command::Verify { t, file } => cmd_verify(t, &file),
        Command::Classify { t, pretty, file } => cmd_classify(t, pretty, &file),
        Command::Construct { family, out } => cmd_construct(family, out.as_deref()),
        Command::Canon { file } => cmd_canon(&file),
        Command::Split { t, budget, file } => cmd_split(t, budget, &file),
    }
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("cannot open {}", path.display()))?))
}

/// Parses trade records, printing per-line diagnostics; fails if any line is bad.
fn load_trades(path: &Path) -> anyhow::Result<Vec<(usize, SignedTrade)>> {
    let mut good = Vec::new();
    let mut bad = 0;
    for (line, rec) in read_lines::<TradeRecord, _>(open(path)?) {
        match rec.and_then(|r| r.to_trade()) {
            Ok(t) => good.push((line, t)),
            Err(e) => {
                eprintln!("{}:{line}: {e:#}", path.display());
                bad += 1;
            }
        }
    }
    if bad > 0 {
        bail!("{bad} malformed record(s)");
    }
    Ok(good)
}

#[derive(Serialize)]
struct VolumeSummary {
    volume: u64,
    all: usize,
    non_degenerate: usize,
    simple: usize,
    non_degenerate_simple: usize,
}

#[derive(Serialize)]
struct ClassSummary {
    key: String,
    volume: u64,
    aut_size: u128,
}

#[derive(Serialize)]
struct EnumerationSummary {
    t: usize,
    v: usize,
    max_vol: u64,
    classes: usize,
    volumes: Vec<VolumeSummary>,
    double_count: DoubleCountSummary,
    class_list: Vec<ClassSummary>,
}

#[derive(Serialize)]
struct DoubleCountSummary {
    lhs: String,
    rhs: String,
    pass: bool,
}

fn cmd_enumerate(t: usize, v: usize, max_vol: u64, out: &Path, jobs: usize, budget: Option<u64>) -> anyhow::Result<()> {
    let mut e = Enumerator::new(EnumerationConfig { jobs, budget });
    let table = e.level(LevelSpec::new(t, v, max_vol))?;
    let mut w = BufWriter::new(File::create(out).with_context(|| format!("cannot create {}", out.display()))?);
    for c in &table.classes {
        write_line(&mut w, &TradeRecord::from_trade(&c.representative))?;
    }
    w.flush()?;

    let dc = double_count_check(&table);
    let summary = EnumerationSummary {
        t,
        v,
        max_vol,
        classes: table.classes.len(),
        volumes: table
            .cells()
            .into_iter()
            .map(|(volume, c)| VolumeSummary {
                volume,
                all: c.all,
                non_degenerate: c.non_degenerate,
                simple: c.simple,
                non_degenerate_simple: c.non_degenerate_simple,
            })
            .collect(),
        double_count: DoubleCountSummary { lhs: dc.lhs.to_string(), rhs: dc.rhs.to_string(), pass: dc.pass },
        class_list: table
            .classes
            .iter()
            .map(|c| ClassSummary { key: c.key.to_hex(), volume: c.volume, aut_size: c.aut_size })
            .collect(),
    };
    let mut sidecar = out.as_os_str().to_owned();
    sidecar.push(".summary.json");
    let text = serde_json::to_string_pretty(&summary)?;
    std::fs::write(&sidecar, format!("{text}\n")).with_context(|| "cannot write summary")?;

    for s in &summary.volumes {
        println!("vol {}: {}({}) {}({})", s.volume, s.all, s.non_degenerate, s.simple, s.non_degenerate_simple);
    }
    println!("double count: lhs={} rhs={} {}", dc.lhs, dc.rhs, if dc.pass { "pass" } else { "FAIL" });
    if !dc.pass {
        return Err(Exit(EXIT_VERIFY_FAILED).into());
    }
    Ok(())
}

fn cmd_verify(t: usize, file: &Path) -> anyhow::Result<()> {
    let mut failed = 0;
    for (line, trade) in load_trades(file)? {
        let ok = t <= trade.v() && trade.is_trade(t)?;
        println!("line {line}: {}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} record(s) are not [{t}]-trades");
        return Err(Exit(EXIT_VERIFY_FAILED).into());
    }
    Ok(())
}

fn show_blocks(blocks: &[Block], v: usize, pretty: bool) -> String {
    let parts: Vec<String> =
        blocks.iter().map(|b| if pretty { b.to_tuple(v) } else { b.mask().to_string() }).collect();
    parts.join(",")
}

fn cmd_classify(t: Option<usize>, pretty: bool, file: &Path) -> anyhow::Result<()> {
    for (line, trade) in load_trades(file)? {
        if trade.is_void() {
            println!("line {line}: void");
            continue;
        }
        let strength = trade.strength();
        let volume = trade.volume()?;
        let mut fields = vec![
            format!("volume={volume}"),
            format!("found={}", trade.foundation().len()),
            format!("afrk={}", trade_affine_rank(&trade)),
            format!("strength={}", strength.map_or("-".into(), |s| s.to_string())),
            format!("simple={}", trade.is_simple()),
            format!("degenerate={}", trade.is_degenerate()?),
        ];
        let class_t = t.or(strength);
        if let Some(ct) = class_t {
            let class = if trade.is_simple() {
                match kasami_classify(&trade.odd_support(), ct) {
                    Ok(c) => match c.i {
                        Some(i) => format!("{:?}(i={i})", c.kind),
                        None => format!("{:?}", c.kind),
                    },
                    Err(e) => format!("unclassified ({e})"),
                }
            } else {
                "n/a (not simple)".into()
            };
            fields.push(format!("class[t={ct}]={class}"));
        }
        if pretty {
            fields.push(format!("plus={}", show_blocks(&trade.positive_leg(), trade.v(), true)));
            fields.push(format!("minus={}", show_blocks(&trade.negative_leg(), trade.v(), true)));
        }
        println!("line {line}: {}", fields.join(" "));
    }
    Ok(())
}

fn parse_masks<const N: usize>(s: &str) -> anyhow::Result<[Block; N]> {
    let masks: Vec<Block> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map(Block::from_mask).with_context(|| format!("bad mask {p:?}")))
        .collect::<anyhow::Result<_>>()?;
    masks.try_into().map_err(|m: Vec<Block>| anyhow!("expected {N} masks, got {}", m.len()))
}

fn cmd_construct(family: ConstructCmd, out: Option<&Path>) -> anyhow::Result<()> {
    let trade = match family {
        ConstructCmd::KnownSpectrum { t } => {
            let s = known_simple_spectrum(t)?;
            println!("exists: {:?}", s.exists);
            println!("not_exists: {:?}", s.not_exists);
            println!("valid_below: {}", s.valid_below);
            return Ok(());
        }
        ConstructCmd::Spectrum { t, i, family } => spectrum_trade(t, i, family)?,
        ConstructCmd::Minimal { v, x0, pairs } => {
            let pairs = pairs
                .iter()
                .map(|p| {
                    let (x, y) = p.split_once(':').ok_or_else(|| anyhow!("pair {p:?} must be X:Y"))?;
                    Ok((Block::from_mask(x.trim().parse()?), Block::from_mask(y.trim().parse()?)))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            minimal_trade(v, Block::from_mask(x0), &pairs)?
        }
        ConstructCmd::Vol3 { v, y, z, shift } => vol3_template(v, parse_masks(&y)?, parse_masks(&z)?, Block::from_mask(shift))?,
        ConstructCmd::Vol6 { kind, v, x, y, z } => {
            let x = Block::from_mask(x);
            let tpl = match kind.as_str() {
                "P3-3" => Vol6Template::ThreeThree { x, y: parse_masks(&y)?, z: parse_masks(&z)? },
                "P2-2" => Vol6Template::TwoTwo { y: parse_masks(&y)?, z: parse_masks(&z)? },
                "P1-3" => Vol6Template::OneThree { y: parse_masks(&y)?, z: parse_masks(&z)? },
                "P1-1" => Vol6Template::OneOne { x, y: parse_masks(&y)?, z: parse_masks(&z)? },
                other => bail!("unknown kind {other:?}; expected P3-3, P2-2, P1-3 or P1-1"),
            };
            vol6_template(v, &tpl)?
        }
        ConstructCmd::ParitySpan { v, gens, parity } => {
            let gens = gens
                .split(',')
                .map(|p| Ok(Block::from_mask(p.trim().parse()?)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            ParityLegSpan::new(gens, parity)?.to_trade(v)?
        }
    };
    let record = TradeRecord::from_trade(&trade);
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
            write_line(&mut w, &record)?;
            w.flush()?;
        }
        None => write_line(&mut io::stdout().lock(), &record)?,
    }
    Ok(())
}

fn cmd_canon(file: &Path) -> anyhow::Result<()> {
    for (line, trade) in load_trades(file)? {
        let c = canonical_form(&trade);
        println!("line {line}: key={} aut={}", c.key.to_hex(), c.aut_size);
    }
    Ok(())
}

fn cmd_split(t: usize, budget: Option<u64>, file: &Path) -> anyhow::Result<()> {
    let mut bad = 0;
    for (line, rec) in read_lines::<UnitradeRecord, _>(open(file)?) {
        let u = match rec.and_then(|r| r.to_unitrade()) {
            Ok(u) => u,
            Err(e) => {
                eprintln!("{}:{line}: {e:#}", file.display());
                bad += 1;
                continue;
            }
        };
        match split_unitrade(&u, t, budget)? {
            SplitOutcome::Found(trade) => println!("{}", serde_json::to_string(&TradeRecord::from_trade(&trade))?),
            SplitOutcome::None => println!("NONE"),
            SplitOutcome::Unknown => println!("UNKNOWN"),
        }
    }
    if bad > 0 {
        bail!("{bad} malformed record(s)");
    }
    Ok(())
}
