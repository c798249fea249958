//! Command-line front end. The `scibank` binary is a thin wrapper over [`run`].

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Component, Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bank::build_bank;
use crate::coword::{self, Frame, Level, LayoutParams};
use crate::emit::{self, ManifestEntry};
use crate::error::{Error, Result};
use crate::ingest::{self, IngestReport, Researcher};
use crate::normalize::{clean_corpus, Facet, StopList, DEFAULT_MIN_LENGTH};
use crate::query::{self, SearchOptions, SynonymTable};
use crate::stats::{self, PublishedTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_DIAGNOSTICS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "scibank", version, about = "Researcher keyword and expertise bank")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a survey export and print row diagnostics.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Build the static site, bank file and manifest.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        terms: TermOptions,
    },
    /// Descriptive statistics of a survey, or an audit of published tables.
    Stats {
        /// Survey export to describe.
        #[arg(long, required_unless_present = "table")]
        input: Option<PathBuf>,
        /// Published table CSV: label, then count,percent column pairs.
        #[arg(long)]
        table: Vec<PathBuf>,
        /// Population size for the response rate.
        #[arg(long)]
        population: Option<u64>,
        /// Emit tables as CSV instead of aligned text.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        terms: TermOptions,
    },
    /// Co-word graph edge list with a force-directed layout.
    Graph {
        #[arg(long)]
        input: PathBuf,
        /// Also write graph.tsv, nodes.csv and edges.csv here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "keyword")]
        facet: Facet,
        #[arg(long, default_value = "phrase")]
        level: Level,
        #[arg(long, default_value_t = coword::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = coword::DEFAULT_ITERATIONS)]
        iterations: usize,
        #[arg(long, default_value_t = 1000.0)]
        width: f64,
        #[arg(long, default_value_t = 1000.0)]
        height: f64,
        #[command(flatten)]
        terms: TermOptions,
    },
    /// Ranked search over a bank file.
    Query {
        /// Bank file written by `build`.
        #[arg(long, alias = "bank")]
        input: PathBuf,
        #[arg(long)]
        facet: Option<Facet>,
        #[arg(long, default_value_t = query::DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long)]
        synonyms: Option<PathBuf>,
        /// Query text; several arguments are joined with spaces.
        query: Vec<String>,
    },
    /// Serve a built site over HTTP.
    Serve {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8000)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TermOptions {
    /// Stoplist file, one word per line.
    #[arg(long, env = "SCIBANK_STOPLIST")]
    pub stoplist: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MIN_LENGTH)]
    pub min_length: usize,
}

impl TermOptions {
    pub fn load(&self) -> Result<StopList> {
        match &self.stoplist {
            Some(path) => StopList::parse(&read(path)?, self.min_length),
            None => Ok(StopList {
                min_length: self.min_length,
                ..StopList::default()
            }),
        }
        .and_then(|s| {
            if s.min_length == 0 {
                Err(Error::Format("--min-length must be at least 1".into()))
            } else {
                Ok(s)
            }
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn load_survey(path: &Path) -> Result<(Vec<Researcher>, IngestReport)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    ingest::parse_survey(file)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error [{}]: {e}", e.code());
            EXIT_ERROR
        }
    }
}

fn io_out(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

pub fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { input } => cmd_validate(&input, out),
        Command::Build { input, out: dir, terms } => cmd_build(&input, &dir, &terms.load()?, out, err),
        Command::Stats {
            input,
            table,
            population,
            csv,
            terms,
        } => cmd_stats(input.as_deref(), &table, population, csv, &terms.load()?, out),
        Command::Graph {
            input,
            out: dir,
            facet,
            level,
            seed,
            iterations,
            width,
            height,
            terms,
        } => {
            let params = LayoutParams {
                iterations,
                frame: Frame { width, height },
                seed,
            };
            cmd_graph(&input, dir.as_deref(), facet, level, &params, &terms.load()?, out)
        }
        Command::Query {
            input,
            facet,
            limit,
            synonyms,
            query,
        } => cmd_query(&input, &query.join(" "), facet, limit, synonyms.as_deref(), out),
        Command::Serve { out: dir, port, bind } => {
            let listener = TcpListener::bind((bind.as_str(), port)).map_err(|e| Error::io(&dir, e))?;
            let addr = listener.local_addr().map_err(|e| Error::io(&dir, e))?;
            writeln!(out, "serving {} at http://{addr}/{}", dir.display(), emit::INDEX_PAGE).map_err(io_out)?;
            serve(&listener, &dir, None)?;
            Ok(EXIT_OK)
        }
    }
}

fn report_status(report: &IngestReport) -> i32 {
    if report.rejected > 0 {
        EXIT_DIAGNOSTICS
    } else {
        EXIT_OK
    }
}

pub fn cmd_validate(input: &Path, out: &mut dyn Write) -> Result<i32> {
    let (_, report) = load_survey(input)?;
    write!(out, "{}", report.render()).map_err(io_out)?;
    writeln!(
        out,
        "rows={} accepted={} rejected={} warnings={}",
        report.total(),
        report.accepted,
        report.rejected,
        report.warnings()
    )
    .map_err(io_out)?;
    Ok(report_status(&report))
}

pub fn cmd_build(
    input: &Path,
    dir: &Path,
    stoplist: &StopList,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let (researchers, report) = load_survey(input)?;
    write!(err, "{}", report.render()).map_err(io_out)?;
    let corpus = clean_corpus(&researchers, stoplist);
    let bank = build_bank(&researchers, &corpus)?;

    let mut manifest = emit::emit_site(&bank, dir)?;
    let bank_text = emit::emit_bank_file(&bank);
    emit::write_file(dir, emit::BANK_FILE, bank_text.as_bytes())?;
    manifest.insert(ManifestEntry::of(emit::BANK_FILE, bank_text.as_bytes()));
    let built_at = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let sidecar = format!("{{\n  \"built_at\": {built_at}\n}}\n");
    emit::write_file(dir, emit::SIDECAR_FILE, sidecar.as_bytes())?;
    emit::write_file(dir, emit::MANIFEST_FILE, manifest.render().as_bytes())?;

    write!(out, "{}", corpus.stats).map_err(io_out)?;
    writeln!(
        out,
        "rows: accepted={} rejected={}\nterms: keyword={} expertise={}\nfiles: {}",
        report.accepted,
        report.rejected,
        bank.keyword_index.len(),
        bank.expertise_index.len(),
        manifest.files.len()
    )
    .map_err(io_out)?;
    Ok(report_status(&report))
}

pub fn cmd_stats(
    input: Option<&Path>,
    tables: &[PathBuf],
    population: Option<u64>,
    as_csv: bool,
    stoplist: &StopList,
    out: &mut dyn Write,
) -> Result<i32> {
    let mut text = String::new();
    let render = |t: &stats::FrequencyTable, heading: &str| {
        if as_csv {
            format!("# {heading}\n{}", t.render_csv())
        } else {
            t.render_text(heading)
        }
    };
    let mut status = EXIT_OK;

    if let Some(input) = input {
        let (researchers, report) = load_survey(input)?;
        status = report_status(&report);
        let profile = ingest::population_profile(&researchers);
        for (heading, table) in [
            ("Position", &profile.by_position),
            ("Research area", &profile.by_area),
            ("Department", &profile.by_department),
        ] {
            text.push_str(&render(table, heading));
            text.push('\n');
        }
        if let Some(population) = population {
            let rate = stats::response_rate(researchers.len() as u64, population)?;
            text.push_str(&format!(
                "response rate: {} of {population} = {rate}%\n",
                researchers.len()
            ));
        }
        let counts = |f: fn(&Researcher) -> usize| -> Vec<u64> {
            researchers.iter().map(f).filter(|&n| n > 0).map(|n| n as u64).collect()
        };
        for (name, values) in [
            ("keywords per respondent", counts(|r| r.keywords.len())),
            ("expertise per respondent", counts(|r| r.expertise.len())),
        ] {
            match stats::distribution_summary(&values) {
                Ok(s) => text.push_str(&format!("{name}: {s}\n")),
                Err(_) => text.push_str(&format!("{name}: no data\n")),
            }
        }
        let corpus = clean_corpus(&researchers, stoplist);
        text.push_str(&corpus.stats.to_string());
        for facet in Facet::BOTH {
            let r = stats::repeat_stats(&corpus.facet(facet).multiplicity);
            let graph = coword::cooccurrence_graph(&corpus, facet, Level::Phrase);
            text.push_str(&format!(
                "{facet}: unique={} repeated={} ({}%) isolation_ratio={:.3}\n",
                r.unique,
                r.repeated,
                r.repeated_percent,
                coword::isolation_ratio(&graph)
            ));
        }
    }

    for path in tables {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        for table in PublishedTable::from_csv(&name, &read(path)?)? {
            let freq = stats::frequency_table(table.rows.iter().map(|r| (r.label.clone(), r.count)));
            text.push_str(&render(&freq, &table.name));
            for finding in stats::audit_table(&table) {
                text.push_str(&format!("{finding}\n"));
            }
            text.push('\n');
        }
    }
    out.write_all(text.as_bytes()).map_err(io_out)?;
    Ok(status)
}

pub fn cmd_graph(
    input: &Path,
    dir: Option<&Path>,
    facet: Facet,
    level: Level,
    params: &LayoutParams,
    stoplist: &StopList,
    out: &mut dyn Write,
) -> Result<i32> {
    let (researchers, report) = load_survey(input)?;
    let corpus = clean_corpus(&researchers, stoplist);
    let graph = coword::cooccurrence_graph(&corpus, facet, level);
    let layout = coword::layout_fr(&graph, params)?;
    let text = coword::export_graph(&graph, Some(&layout));
    if let Some(dir) = dir {
        let (nodes, edges) = coword::export_csv(&graph, Some(&layout))?;
        emit::write_file(dir, "graph.tsv", text.as_bytes())?;
        emit::write_file(dir, "nodes.csv", nodes.as_bytes())?;
        emit::write_file(dir, "edges.csv", edges.as_bytes())?;
    }
    out.write_all(text.as_bytes()).map_err(io_out)?;
    Ok(report_status(&report))
}

pub fn cmd_query(
    bank_file: &Path,
    text: &str,
    facet: Option<Facet>,
    limit: usize,
    synonyms: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let bank = emit::load_bank(&read(bank_file)?)?;
    let table = synonyms.map(|p| read(p).and_then(|t| SynonymTable::parse(&t))).transpose()?;
    let results = query::search_with(
        &bank,
        text,
        &SearchOptions {
            facet,
            limit,
            synonyms: table.as_ref(),
        },
    );
    out.write_all(query::render_results(&bank, &results).as_bytes())
        .map_err(io_out)?;
    Ok(EXIT_OK)
}

fn percent_decode(path: &str) -> Option<String> {
    let bytes = path.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = path.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

/// Maps a request path onto a file under `root`, refusing anything that
/// would leave it.
fn resolve(root: &Path, request_path: &str) -> Option<PathBuf> {
    let path = request_path.split(['?', '#']).next().unwrap_or("");
    let decoded = percent_decode(path)?;
    let rel = decoded.trim_start_matches('/');
    let rel = if rel.is_empty() { emit::INDEX_PAGE } else { rel };
    let rel = Path::new(rel);
    if rel.components().all(|c| matches!(c, Component::Normal(_))) {
        Some(root.join(rel))
    } else {
        None
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("htm" | "html") => "text/html; charset=utf-8",
        Some("json") => "application/json",
        Some("csv") => "text/csv; charset=utf-8",
        _ => "text/plain; charset=utf-8",
    }
}

fn handle(stream: TcpStream, root: &Path) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 || line.trim().is_empty() {
            break;
        }
    }
    let mut parts = request_line.split_whitespace();
    let (method, target) = (parts.next().unwrap_or(""), parts.next().unwrap_or("/"));
    let mut stream = stream;
    let file = (method == "GET")
        .then(|| resolve(root, target))
        .flatten()
        .filter(|p| p.is_file());
    match file.and_then(|p| fs::read(&p).ok().map(|body| (p, body))) {
        Some((path, body)) => {
            write!(
                stream,
                "HTTP/1.0 200 OK\r\nContent-Type: {}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
                content_type(&path),
                body.len()
            )?;
            stream.write_all(&body)
        }
        None => {
            let body = b"not found\n";
            write!(
                stream,
                "HTTP/1.0 404 Not Found\r\nContent-Type: text/plain\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
                body.len()
            )?;
            stream.write_all(body)
        }
    }
}

/// Minimal static file server for a built site. Serves `max_requests`
/// connections, or forever when `None`.
pub fn serve(listener: &TcpListener, root: &Path, max_requests: Option<usize>) -> Result<()> {
    let mut served = 0;
    for stream in listener.incoming() {
        let stream = stream.map_err(|e| Error::io(root, e))?;
        // A broken client connection must not stop the server.
        let _ = handle(stream, root);
        served += 1;
        if max_requests.is_some_and(|m| served >= m) {
            break;
        }
    }
    Ok(())
}
