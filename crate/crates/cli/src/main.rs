use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use hopkit::closures::{self, RegularSpec};
use hopkit::grammar::{parse_grammar, ECFGrammar};
use hopkit::hop::{self, HopVerdict};
use hopkit::maxgrammar::{self, grammar_graph_of};
use hopkit::phi_file::{parse_phi, phi_to_file};
use hopkit::reduction::{Recognizer, Strategy};
use hopkit::symbol::{self, Symbol, Terminal};
use hopkit::symfa::automaton_of;
use hopkit::tagged::{check_conflicts, TagSet};
use hopkit::tagging::tagged_grammar_report;
use hopkit::{props, Error};

#[derive(Parser)]
#[command(name = "hopkit", version, about = "Higher-order operator precedence languages")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct WordArgs {
    /// Terminals, one per argument (or one string with --chars)
    word: Vec<String>,
    /// Read the word as contiguous single-character terminals
    #[arg(long)]
    chars: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report conflicts of a tag-set file
    PhiCheck { phi: PathBuf },
    /// Print the unique tagging of a word, or "none"
    Tag {
        phi: PathBuf,
        #[command(flatten)]
        word: WordArgs,
    },
    /// Decide membership in the max-language by handle reduction
    Reduce {
        phi: PathBuf,
        #[command(flatten)]
        word: WordArgs,
        /// leftmost, rightmost, or a comma-separated list of handle indices
        #[arg(long, default_value = "leftmost")]
        strategy: String,
        /// Print every reduction step
        #[arg(long)]
        trace: bool,
        /// Print the trace as machine-readable records
        #[arg(long)]
        records: bool,
        /// File with one word per line
        #[arg(long)]
        words: Option<PathBuf>,
        /// Worker threads for --words
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Build the symmetrical automaton
    Fa {
        phi: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Synthesize the max-grammar of a tag set
    Maxgrammar {
        phi: PathBuf,
        /// Write the max-grammar (tags erased) as a grammar file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the tagged max-grammar instead
        #[arg(long)]
        tagged: bool,
        /// Write the grammar graph as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Grammar file operations
    Grammar {
        #[command(subcommand)]
        cmd: GrammarCmd,
    },
    /// Decide HOP(k) for a grammar
    Hopcheck {
        grammar: PathBuf,
        #[arg(short, default_value_t = 3, conflicts_with = "search_k")]
        k: usize,
        /// Find the least odd k up to this bound
        #[arg(long)]
        search_k: Option<usize>,
    },
    /// Print the operator-precedence matrix
    Oprelations { grammar: PathBuf },
    /// Union of two HOP(k) grammars
    Union {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(short, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Max-grammar of Red(Φ) ∩ L(R)
    IntersectRegular {
        phi: PathBuf,
        regex: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection of two HOP grammars (not supported)
    Intersect { g1: PathBuf, g2: PathBuf },
    /// Complement of a HOP grammar (not supported)
    Complement { grammar: PathBuf },
    /// Tag set whose max-language is an SLT language
    SltEmbed {
        slt: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search all tag sets of width 3 for one matching a regular target
    PhiSearch {
        regex: PathBuf,
        #[arg(long, default_value_t = 9)]
        max_len: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run randomized consistency checks
    Selfcheck {
        #[arg(long, default_value_t = props::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GrammarCmd {
    /// Check operator form, copy rules, ambiguity and reducedness
    Validate { grammar: PathBuf },
    /// List the sentences up to a length
    Enumerate {
        grammar: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Enumerate the tagged grammar
        #[arg(long)]
        tagged: bool,
    },
    /// Print the tagged grammar
    Tag {
        grammar: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Style {
        let off = std::env::var("HOPKIT_COLOR").is_ok_and(|v| v == "0");
        Style {
            color: !off && std::io::stdout().is_terminal(),
        }
    }

    fn good(&self, s: &str) -> String {
        self.paint("32", s)
    }

    fn bad(&self, s: &str) -> String {
        self.paint("31", s)
    }

    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_phi(path: &Path) -> Result<TagSet> {
    parse_phi(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_grammar(path: &Path) -> Result<ECFGrammar> {
    parse_grammar(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn parse_word(tokens: &[String], chars: bool) -> Result<Vec<Terminal>> {
    let syms: Vec<Symbol> = if chars {
        tokens.iter().flat_map(|t| symbol::compact(t)).collect()
    } else {
        tokens
            .iter()
            .flat_map(|t| t.split_whitespace())
            .map(Symbol::from_token)
            .collect()
    };
    let mut out = Vec::new();
    for s in syms {
        match s {
            Symbol::Term(t) if !t.is_hash() => out.push(t),
            other => bail!("`{other}` may not occur in an input word"),
        }
    }
    if out.is_empty() {
        bail!("empty word");
    }
    Ok(out)
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    match s {
        "leftmost" => Ok(Strategy::Leftmost),
        "rightmost" => Ok(Strategy::Rightmost),
        list => {
            let order = list
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| anyhow!("unknown strategy `{list}`"))?;
            Ok(Strategy::Given(order))
        }
    }
}

fn show(w: &[Terminal]) -> String {
    symbol::plain(w)
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

fn run(cli: Cli, style: &Style) -> Result<u8> {
    match cli.cmd {
        Cmd::PhiCheck { phi } => {
            let phi = load_phi(&phi)?;
            let report = check_conflicts(&phi);
            println!("k = {}, {} words", phi.k(), phi.len());
            if report.is_empty() {
                println!("{}", style.good("conflict-free"));
                Ok(0)
            } else {
                for g in &report.groups {
                    let ws: Vec<String> = g.words.iter().map(|w| w.to_string()).collect();
                    println!(
                        "{}: {}  (projection {})",
                        style.bad("conflict"),
                        ws.join(" / "),
                        symbol::plain_compact(&g.projection)
                    );
                }
                Ok(1)
            }
        }
        Cmd::Tag { phi, word } => {
            let rec = Recognizer::new(&load_phi(&phi)?)?;
            let w = parse_word(&word.word, word.chars)?;
            match rec.tag(&w) {
                Some(x) => {
                    println!("{x}");
                    Ok(0)
                }
                None => {
                    println!("none");
                    Ok(1)
                }
            }
        }
        Cmd::Reduce {
            phi,
            word,
            strategy,
            trace,
            records,
            words,
            jobs,
        } => {
            let rec = Recognizer::new(&load_phi(&phi)?)?;
            let strategy = parse_strategy(&strategy)?;
            if let Some(file) = words {
                let text = read(&file)?;
                let list = text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with(';'))
                    .map(|l| parse_word(&[l.to_string()], word.chars))
                    .collect::<Result<Vec<_>>>()?;
                let verdicts: Vec<bool> =
                    thread_pool(jobs)?.install(|| list.par_iter().map(|w| rec.member_with(w, &strategy).0).collect());
                for (w, ok) in list.iter().zip(&verdicts) {
                    let v = if *ok { style.good("accept") } else { style.bad("reject") };
                    println!("{}\t{v}", show(w));
                }
                return Ok(if verdicts.iter().all(|&v| v) { 0 } else { 1 });
            }
            let w = parse_word(&word.word, word.chars)?;
            let (ok, tr) = rec.member_with(&w, &strategy);
            if let Some(tr) = &tr {
                if records {
                    print!("{}", tr.records());
                } else if trace {
                    print!("{}", tr.render());
                }
            } else if trace || records {
                println!("no tagging");
            }
            if ok {
                println!("{}", style.good("accepted"));
                Ok(0)
            } else {
                println!("{}", style.bad("rejected"));
                Ok(1)
            }
        }
        Cmd::Fa { phi, dot } => {
            let phi = load_phi(&phi)?;
            let a = automaton_of(&phi);
            println!(
                "{} states, {} arcs, {}",
                a.num_states(),
                a.num_arcs(),
                if a.to_nfa().is_unambiguous() {
                    "unambiguous"
                } else {
                    "ambiguous"
                }
            );
            print!("{}", a.dump());
            if let Some(path) = dot {
                write(&path, &a.to_dot())?;
            }
            Ok(0)
        }
        Cmd::Maxgrammar {
            phi,
            out,
            tagged,
            dot,
        } => {
            let phi = load_phi(&phi)?;
            let mg = maxgrammar::max_grammar(&phi)?;
            if mg.is_empty() {
                println!("empty grammar");
            }
            print!("{}", mg.report());
            if let Some(path) = out {
                let g = if tagged { &mg.tagged } else { &mg.plain };
                write(&path, &g.to_file())?;
            }
            if let Some(path) = dot {
                write(&path, &grammar_graph_of(&automaton_of(&phi), &mg).to_dot())?;
            }
            Ok(0)
        }
        Cmd::Grammar { cmd } => grammar_cmd(cmd, style),
        Cmd::Hopcheck {
            grammar,
            k,
            search_k,
        } => {
            let g = load_grammar(&grammar)?;
            let verdict = match search_k {
                Some(max) => match hop::minimal_k(&g, max) {
                    Some(k) => hop::hop_check(&g, k),
                    None => {
                        println!("{}", style.bad(&format!("not HOP(k) for any odd k ≤ {max}")));
                        return Ok(1);
                    }
                },
                None => {
                    hopkit::tagged::check_width(k)?;
                    hop::hop_check(&g, k)
                }
            };
            print_verdict(&verdict, style);
            Ok(if verdict.is_hop { 0 } else { 1 })
        }
        Cmd::Oprelations { grammar } => {
            let g = load_grammar(&grammar)?;
            let m = hop::op_relations(&g);
            print!("{}", m.table());
            Ok(if m.is_conflict_free() { 0 } else { 1 })
        }
        Cmd::Union { g1, g2, k, out } => {
            let (a, b) = (load_grammar(&g1)?, load_grammar(&g2)?);
            match closures::union(&a, &b, k) {
                Ok(u) => {
                    print!("{}", u.to_file());
                    if let Some(path) = out {
                        write(&path, &u.to_file())?;
                    }
                    Ok(0)
                }
                Err(Error::Conflict(msg)) => {
                    println!("{}: {msg}", style.bad("joint conflict"));
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::IntersectRegular { phi, regex, out } => {
            let phi = load_phi(&phi)?;
            let r0 = RegularSpec::parse(&read(&regex)?).with_context(|| format!("{}", regex.display()))?;
            let mg = closures::intersect_regular_max(&phi, &r0)?;
            if mg.is_empty() {
                println!("empty grammar");
                return Ok(1);
            }
            print!("{}", mg.plain.to_file());
            if let Some(path) = out {
                write(&path, &mg.plain.to_file())?;
            }
            Ok(0)
        }
        Cmd::Intersect { .. } | Cmd::Complement { .. } => {
            eprintln!(
                "error: intersection and complement of two HOP grammars are not supported; \
                 use intersect-regular for Red(Φ) ∩ R"
            );
            Ok(2)
        }
        Cmd::SltEmbed { slt, out } => {
            let f = maxgrammar::parse_slt(&read(&slt)?)?;
            let phi = maxgrammar::slt_embed(&f)?;
            let text = phi_to_file(&phi);
            print!("{text}");
            if let Some(path) = out {
                write(&path, &text)?;
            }
            Ok(0)
        }
        Cmd::PhiSearch { regex, max_len, jobs } => {
            let r0 = RegularSpec::parse(&read(&regex)?)?;
            let mut terminals: Vec<Terminal> = r0.dfa().labels().into_iter().collect();
            terminals.sort();
            let outcome = thread_pool(jobs)?.install(|| {
                maxgrammar::search_phi3(&terminals, |w| r0.accepts(w), max_len, &[])
            });
            println!("{} candidates examined", outcome.examined);
            println!("{} matching up to length {max_len}", outcome.matches.len());
            for (i, p) in outcome.matches.iter().enumerate() {
                let ws: Vec<String> = p.words().iter().map(|w| w.to_string()).collect();
                println!("match {}: {{{}}}", i + 1, ws.join(", "));
            }
            Ok(if outcome.matches.is_empty() { 1 } else { 0 })
        }
        Cmd::Selfcheck { seed } => selfcheck(seed, style),
    }
}

fn print_verdict(v: &HopVerdict, style: &Style) {
    if v.is_hop {
        println!("{}", style.good(&format!("HOP({}): yes", v.k)));
        print!("{}", phi_to_file(v.phi.as_ref().expect("phi")));
    } else {
        println!("{}", style.bad(&format!("HOP({}): no", v.k)));
        for g in &v.conflicts.as_ref().expect("conflicts").groups {
            let ws: Vec<String> = g.words.iter().map(|w| w.to_string()).collect();
            println!(
                "conflict: {}  (projection {})",
                ws.join(" / "),
                symbol::plain_compact(&g.projection)
            );
        }
    }
}

fn grammar_cmd(cmd: GrammarCmd, style: &Style) -> Result<u8> {
    match cmd {
        GrammarCmd::Validate { grammar } => {
            let text = read(&grammar)?;
            match parse_grammar(&text) {
                Ok(g) => {
                    let report = g.validate();
                    print!("{report}");
                    Ok(if report.is_valid() { 0 } else { 1 })
                }
                Err(
                    e @ (Error::AmbiguousRule(_)
                    | Error::CopyRule(_)
                    | Error::NotOperatorForm(_)
                    | Error::EmptyWordRule(_)),
                ) => {
                    println!("{}: {e}", style.bad("invalid"));
                    Ok(1)
                }
                Err(e) => Err(anyhow!(e).context(grammar.display().to_string())),
            }
        }
        GrammarCmd::Enumerate {
            grammar,
            max_len,
            tagged,
        } => {
            let g = load_grammar(&grammar)?;
            let words: Vec<String> = if tagged {
                let (tg, _) = tagged_grammar_report(&g);
                let mut ws: Vec<Vec<Symbol>> = tg.enumerate(max_len).into_iter().collect();
                ws.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
                ws.iter().map(|w| symbol::pretty(w)).collect()
            } else {
                let mut ws: Vec<Vec<Terminal>> = g.enumerate_plain(max_len).into_iter().collect();
                ws.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
                ws.iter().map(|w| show(w)).collect()
            };
            for w in &words {
                println!("{w}");
            }
            Ok(0)
        }
        GrammarCmd::Tag { grammar, out } => {
            let g = load_grammar(&grammar)?;
            let (tg, removed) = tagged_grammar_report(&g);
            for name in removed {
                eprintln!("warning: {name} has no tagged rule body and was removed");
            }
            print!("{}", tg.pretty());
            if let Some(path) = out {
                write(&path, &tg.to_file())?;
            }
            Ok(0)
        }
    }
}

fn selfcheck(seed: u64, style: &Style) -> Result<u8> {
    use hopkit::fixtures;
    use hopkit::tagged::{extract_tagged_kwords, extract_windows, mixed_tag_witness};

    let mut rng = props::rng(seed);
    let ts = [Terminal::new("a"), Terminal::new("b"), Terminal::new("c")];
    let mut checks: Vec<(String, bool)> = Vec::new();

    let mut ok = true;
    for _ in 0..500 {
        let s = props::random_mixed(&mut rng, &ts, 15);
        for k in [3, 5] {
            let phi = extract_tagged_kwords(&s, k);
            let f = extract_windows(&s, k);
            ok &= phi.iter().all(|w| f.contains(w));
        }
    }
    checks.push(("tagged k-words are windows".into(), ok));

    let mut ok = true;
    for _ in 0..200 {
        let w = props::random_tagged_word(&mut rng, &ts, 5);
        let (s1, s2) = props::random_tag_pair(&mut rng);
        for h in (3..=7).step_by(2) {
            ok &= mixed_tag_witness(&w, s1, s2, h).is_some();
        }
    }
    checks.push(("mixed-tag conflict witnesses".into(), ok));

    let mut ok = true;
    for (k, ws) in [(3, fixtures::ACB), (3, fixtures::DYCK), (5, fixtures::AAB5)] {
        ok &= automaton_of(&fixtures::phi(k, ws)).to_nfa().is_unambiguous();
    }
    checks.push(("symmetrical automata are unambiguous".into(), ok));

    let mut ok = true;
    for (k, ws) in [(3, fixtures::ACB), (3, fixtures::A_B_A)] {
        ok &= maxgrammar::max_grammar_disagreements(&fixtures::phi(k, ws), 8)?.is_empty();
    }
    checks.push(("max-grammars agree with reduction".into(), ok));

    let mut ok = true;
    for text in [fixtures::SPLIT, fixtures::NESTED, fixtures::PALINDROME] {
        let tg = hopkit::tagging::tagged_grammar(&fixtures::grammar(text));
        for k in [3, 5] {
            ok &= hop::tagged_kwords_of_tagged(&tg, k).words() == hop::enumerated_kwords(&tg, k, 31).words();
        }
    }
    checks.push(("fixpoint k-words match enumeration".into(), ok));

    let rec = Recognizer::new(&fixtures::phi(3, fixtures::ACB))?;
    let mut ok = true;
    for _ in 0..200 {
        let w = props::random_word_upto(&mut rng, &ts, 10);
        ok &= rec.confluent(&w);
    }
    checks.push(("reduction is confluent".into(), ok));

    let mut failed = 0;
    for (name, pass) in &checks {
        let mark = if *pass { style.good("pass") } else { style.bad("FAIL") };
        println!("{mark}  {name}");
        failed += usize::from(!pass);
    }
    println!("seed {seed}: {} of {} checks passed", checks.len() - failed, checks.len());
    Ok(if failed == 0 { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    match run(cli, &style) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
