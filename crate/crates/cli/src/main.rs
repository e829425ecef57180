use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use braidfol::braid_core::{
    closure_components, crossing_stats, genus, is_standard, parse_braid_with_strands,
    primality_precheck, standardize, BraidWord, Parity,
};
use braidfol::branched_surface::{manual_assign, ArcAssignment};
use braidfol::construction::{
    cable_obstruction, construct, km_family, meets_bound, splice_feasible, ObstructionVerdict,
};
use braidfol::oracle::{exhaustive_search, verify_certificate, verify_certificate_json};
use braidfol::surface_model::{build_diagram, hopf_sequence, render, RenderFormat};
use braidfol::train_track::Certificate;
use braidfol::Error;
use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Taut foliation slope certificates for positive braid knots.
#[derive(Debug, Parser)]
#[command(name = "braidfol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A braid word given inline, or read from stdin when omitted.
#[derive(Debug, Args)]
struct WordArg {
    /// Tokens `k` or `k^p`; several arguments are joined with spaces.
    word: Vec<String>,
    /// Strand count; defaults to one more than the largest index.
    #[arg(long = "n")]
    strands: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Crossing statistics and the primality precheck.
    Stats {
        #[command(flatten)]
        input: WordArg,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite to a standard form.
    Standardize {
        #[command(flatten)]
        input: WordArg,
    },
    /// Seifert genus of the closure.
    Genus {
        #[command(flatten)]
        input: WordArg,
    },
    /// Build a sink-disk-free branched surface and print its certificate.
    Construct {
        #[command(flatten)]
        input: WordArg,
        /// Print the certificate as JSON instead of the report.
        #[arg(long)]
        json: bool,
        /// Write an SVG drawing of the chosen arcs.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Append an ASCII drawing to the report.
        #[arg(long)]
        ascii: bool,
    },
    /// Re-check a certificate with the brute-force oracle.
    Verify {
        /// Certificate JSON file; stdin when omitted.
        file: Option<PathBuf>,
    },
    /// Exhaustive search over co-oriented arc subsets.
    Search {
        #[command(flatten)]
        input: WordArg,
        /// Most candidate arcs enumerated (at most 24).
        #[arg(long, default_value_t = 12)]
        max_arcs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the family braid `(σ1 σ2 σ3)^7 (σ3 σ2)^{3m}`.
    Km {
        #[arg(long)]
        m: usize,
    },
    /// Cable obstruction for the `(p, q)`-cable of a genus `gk` knot.
    Cable {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        q: i32,
        #[arg(long)]
        gk: u32,
    },
    /// Splicing two positive braid knot exteriors along slope +1.
    Splice {
        #[arg(long)]
        g1: u32,
        #[arg(long)]
        g2: u32,
    },
    /// Construct and re-check random standardized prime braids.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "n", default_value_t = 5)]
        strands: usize,
        /// Longest word drawn; lengths range over `[max(n, len/2), len]`.
        #[arg(long, default_value_t = 24)]
        len: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

/// Outcome of a command: text for stdout and an exit code.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::CaseExhausted(_)) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("BRAIDFOL_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn read_stdin() -> Res<String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::Io(format!("reading stdin: {e}")))?;
    Ok(s)
}

fn load_word(input: &WordArg) -> Res<BraidWord> {
    let text = if input.word.is_empty() {
        read_stdin()?
    } else {
        input.word.join(" ")
    };
    Ok(parse_braid_with_strands(&text, input.strands)?)
}

fn run(command: Command) -> Res<Outcome> {
    match command {
        Command::Stats { input, json } => stats(&load_word(&input)?, json),
        Command::Standardize { input } => {
            let b = load_word(&input)?;
            Ok(Outcome::ok(format!("{}\n", standardize(&b))))
        }
        Command::Genus { input } => {
            let b = load_word(&input)?;
            Ok(Outcome::ok(format!("{}\n", genus(&b)?)))
        }
        Command::Construct {
            input,
            json,
            svg,
            ascii,
        } => construct_cmd(&load_word(&input)?, json, svg, ascii),
        Command::Verify { file } => {
            let text = match file {
                Some(p) => std::fs::read_to_string(&p)
                    .map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
                None => read_stdin()?,
            };
            if verify_certificate_json(&text)? {
                Ok(Outcome::ok("certificate verified\n".into()))
            } else {
                Ok(Outcome {
                    text: "certificate REJECTED by oracle\n".into(),
                    code: 2,
                })
            }
        }
        Command::Search {
            input,
            max_arcs,
            json,
        } => {
            let b = load_word(&input)?;
            let r = exhaustive_search(&b, max_arcs)?;
            if json {
                return Ok(Outcome::ok(format!(
                    "{}\n",
                    serde_json::to_string_pretty(&r).expect("search result serializes")
                )));
            }
            let mut s = String::new();
            let _ = writeln!(s, "word          {b}");
            let _ = writeln!(s, "explored      {}", r.explored);
            let _ = writeln!(s, "sink-free     {}", r.sink_free_count);
            let _ = writeln!(s, "best tau_sup  {}", r.best_tau);
            let arcs: Vec<String> = r
                .best_assignment
                .iter()
                .map(|(a, d)| format!("{a} {d}"))
                .collect();
            let _ = writeln!(s, "best arcs     {}", arcs.join(", "));
            Ok(Outcome::ok(s))
        }
        Command::Km { m } => Ok(Outcome::ok(format!("{}\n", km_family(m)?))),
        Command::Cable { p, q, gk } => Ok(Outcome::ok(verdict(&cable_obstruction(p, q, gk)?))),
        Command::Splice { g1, g2 } => Ok(Outcome::ok(verdict(&splice_feasible(g1, g2)))),
        Command::Corpus {
            seed,
            strands,
            len,
            count,
        } => corpus(seed, strands, len, count),
    }
}

fn stats(b: &BraidWord, json: bool) -> Res<Outcome> {
    let st = crossing_stats(b);
    let comps = closure_components(b);
    let s = standardize(b);
    let report = if comps == 1 {
        Some(primality_precheck(&s)?)
    } else {
        None
    };
    if json {
        let v = serde_json::json!({
            "word": b.to_string(),
            "strands": b.strands(),
            "components": comps,
            "stats": st,
            "standardized": s.to_string(),
            "precheck": report,
        });
        return Ok(Outcome::ok(format!("{v:#}\n")));
    }
    let mut o = String::new();
    let _ = writeln!(o, "word        {b}");
    let _ = writeln!(o, "strands     {}", b.strands());
    let _ = writeln!(o, "components  {comps}");
    let counts: Vec<String> = st.counts.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(o, "counts      ({})", counts.join(", "));
    let _ = writeln!(o, "C           {}", st.total);
    let _ = writeln!(
        o,
        "C1 C2 C3    {} {} {}  (min: C{})",
        st.mod3_sums[0], st.mod3_sums[1], st.mod3_sums[2], st.c_min_choice
    );
    let max = match st.c_max_choice {
        Parity::Odd => "odd",
        Parity::Even => "even",
    };
    let _ = writeln!(
        o,
        "Codd Ceven  {} {}  (max: {max})",
        st.odd_sum, st.even_sum
    );
    let _ = writeln!(o, "standard    {s}");
    match report {
        None => {
            let _ = writeln!(o, "precheck    skipped: closure is not a knot");
        }
        Some(r) if r.passes() => {
            let _ = writeln!(o, "precheck    passes (genus {})", genus(&s)?);
        }
        Some(r) => {
            let _ = writeln!(o, "precheck    fails");
            for v in &r.violations {
                let _ = writeln!(o, "  {v}");
            }
        }
    }
    Ok(Outcome::ok(o))
}

/// The assignment a certificate describes, on its own presentation.
fn assignment_of(c: &Certificate) -> Res<ArcAssignment> {
    let b = parse_braid_with_strands(&c.braid, Some(c.n))?;
    let choices: Vec<_> = c
        .chosen_arcs
        .iter()
        .zip(&c.directions)
        .map(|(a, d)| (a.column, a.ordinal, *d))
        .collect();
    Ok(manual_assign(&build_diagram(&b), &choices)?)
}

fn construct_cmd(b: &BraidWord, json: bool, svg: Option<PathBuf>, ascii: bool) -> Res<Outcome> {
    let c = construct(b)?;
    info!("constructed {} with tau_sup {}", c.braid, c.tau_sup);
    let a = assignment_of(&c)?;
    if let Some(path) = &svg {
        let drawing = render(a.diagram(), Some(&a), RenderFormat::Svg)?;
        std::fs::write(path, drawing)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    let mut text = if json {
        format!("{}\n", c.to_json())
    } else {
        report(&c, &a)
    };
    if ascii {
        text.push('\n');
        text.push_str(&render(a.diagram(), Some(&a), RenderFormat::Ascii)?);
    }
    Ok(Outcome::ok(text))
}

fn report(c: &Certificate, a: &ArcAssignment) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "braid       {}", c.braid);
    let _ = writeln!(o, "strands     {}", c.n);
    let _ = writeln!(o, "genus       {}  (2g-1 = {})", c.genus, 2 * c.genus - 1);
    if let Some(t) = &c.case_trace {
        let _ = writeln!(
            o,
            "pipeline    {}  (presentation {}{})",
            t.pipeline,
            t.presentation_choice,
            if t.repaired { ", repaired" } else { "" }
        );
    }
    let _ = writeln!(o, "\ncolumn  c_i  disks");
    let used = a.column_counts();
    for i in 1..c.n {
        let _ = writeln!(
            o,
            "{i:>6}  {:>3}  {:>5}",
            a.diagram().count(i),
            used.get(i).copied().unwrap_or(0)
        );
    }
    let _ = writeln!(o, "\narcs");
    for (arc, d) in a.iter() {
        let _ = writeln!(o, "  {arc} {d}");
    }
    let pairs: Vec<String> = c
        .linked_pairs
        .iter()
        .map(|(x, y)| format!("{{{x}, {y}}}"))
        .collect();
    let _ = writeln!(
        o,
        "\nlinked      {}",
        if pairs.is_empty() {
            "none".into()
        } else {
            pairs.join(" ")
        }
    );
    let _ = writeln!(o, "deduction   {}", c.deduction);
    let _ = writeln!(o, "sink-free   {}", c.sink_free);
    let _ = writeln!(o, "tau_sup     {}", c.tau_sup);
    let _ = writeln!(
        o,
        "slopes      r < {}{}",
        c.slope_claim.upper,
        if c.slope_claim.valid {
            ""
        } else {
            " (not certified)"
        }
    );
    if let Some(t) = &c.case_trace {
        let _ = writeln!(o, "\ntrace");
        for s in &t.steps {
            let _ = write!(o, "  {} [{}] {}", s.stage, s.case, s.action);
            if !s.arcs.is_empty() {
                let _ = write!(o, " {{{}}}", s.arcs.join(", "));
            }
            o.push('\n');
        }
    }
    o
}

fn verdict(v: &ObstructionVerdict) -> String {
    let mut o = format!("{:?}\n", v.conclusion);
    for line in &v.chain {
        let _ = writeln!(o, "  {line}");
    }
    o
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    constructed: usize,
    exhausted: usize,
    other_errors: usize,
    below_bound: usize,
    rejected: usize,
    hopf_mismatch: usize,
}

impl Tally {
    fn add(mut self, o: Self) -> Self {
        self.constructed += o.constructed;
        self.exhausted += o.exhausted;
        self.other_errors += o.other_errors;
        self.below_bound += o.below_bound;
        self.rejected += o.rejected;
        self.hopf_mismatch += o.hopf_mismatch;
        self
    }
}

/// Random words reduced to standardized prime knots of genus ≥ 2, drawn
/// until `count` are found or the attempt budget runs out.
fn corpus_words(seed: u64, n: usize, len: usize, count: usize) -> (Vec<BraidWord>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count.saturating_mul(1000).max(1000) {
        attempts += 1;
        let size = rng.gen_range(n.max(len / 2).min(len)..=len);
        let letters: Vec<usize> = (0..size).map(|_| rng.gen_range(1..n)).collect();
        let Ok(b) = BraidWord::new(n, letters) else {
            continue;
        };
        if closure_components(&b) != 1 {
            continue;
        }
        let s = standardize(&b);
        let prime = primality_precheck(&s).map(|r| r.passes()).unwrap_or(false);
        if prime && genus(&s).map(|g| g >= 2).unwrap_or(false) {
            out.push(s);
        }
    }
    (out, attempts)
}

fn corpus(seed: u64, n: usize, len: usize, count: usize) -> Res<Outcome> {
    if n < 4 {
        return Err(Error::Domain(format!("corpus needs at least 4 strands, got {n}")).into());
    }
    if len == 0 {
        return Err(Error::Domain("corpus needs --len ≥ 1".into()).into());
    }
    let (words, attempts) = corpus_words(seed, n, len, count);
    info!("corpus: {} words from {attempts} draws", words.len());
    let tally = words
        .par_iter()
        .map(|b| {
            let mut t = Tally::default();
            match construct(b) {
                Ok(c) => {
                    t.constructed = 1;
                    if !meets_bound(&c) {
                        t.below_bound = 1;
                    }
                    if !verify_certificate(&c) {
                        t.rejected = 1;
                    }
                    let hopf = hopf_sequence(b).map(|h| h.plumbing_count()).ok();
                    if hopf != Some(2 * c.genus) {
                        t.hopf_mismatch = 1;
                    }
                    debug!("{b}: tau {}", c.tau_sup);
                }
                Err(Error::CaseExhausted(m)) => {
                    debug!("{b}: exhausted: {m}");
                    t.exhausted = 1;
                }
                Err(e) => {
                    debug!("{b}: {e}");
                    t.other_errors = 1;
                }
            }
            t
        })
        .reduce(Tally::default, Tally::add);
    let standard = words.iter().filter(|b| is_standard(b)).count();
    let mut o = String::new();
    let _ = writeln!(o, "seed {seed}  n {n}  len {len}  draws {attempts}");
    let _ = writeln!(o, "{:<22}{:>8}", "words", words.len());
    let _ = writeln!(o, "{:<22}{:>8}", "standard form", standard);
    let _ = writeln!(o, "{:<22}{:>8}", "constructed", tally.constructed);
    let _ = writeln!(o, "{:<22}{:>8}", "case exhausted", tally.exhausted);
    let _ = writeln!(o, "{:<22}{:>8}", "other errors", tally.other_errors);
    let _ = writeln!(o, "{:<22}{:>8}", "below bound", tally.below_bound);
    let _ = writeln!(o, "{:<22}{:>8}", "oracle rejected", tally.rejected);
    let _ = writeln!(o, "{:<22}{:>8}", "hopf count mismatch", tally.hopf_mismatch);
    let failed = tally.exhausted
        + tally.below_bound
        + tally.rejected
        + tally.hopf_mismatch
        + (words.len() - standard);
    Ok(Outcome {
        text: o,
        code: if failed > 0 { 2 } else { 0 },
    })
}
