//! Loading zero tables from text files and from a remote L-function database.
//!
//! Zero file format (UTF-8): one `ordinate [multiplicity]` per line in
//! ascending order; lines starting with `#` are comments. Two comment
//! directives are understood:
//!
//! ```text
//! # coverage_height: 74920.9
//! # symmetric: false
//! ```
//!
//! Without them the coverage height is the last ordinate and the table is
//! symmetric (each positive ordinate stands for a conjugate pair).

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use serde::Deserialize;
use serde_json::value::RawValue;

use crate::error::{LiLabError, Result};
use crate::zeros::{Ordinate, ZeroTable};

/// Environment variable overriding the remote base URL.
pub const BASE_URL_ENV: &str = "LILAB_ZERO_BASE_URL";

pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org";

const COVERAGE_DIRECTIVE: &str = "coverage_height:";
const SYMMETRIC_DIRECTIVE: &str = "symmetric:";

/// Parse the zero file format.
pub fn parse_ordinates(text: &str) -> Result<ZeroTable> {
    let mut ordinates: Vec<Ordinate> = Vec::new();
    let mut coverage: Option<(f64, String)> = None;
    let mut symmetric = true;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix(COVERAGE_DIRECTIVE) {
                let v = v.trim();
                let value = parse_decimal(v, line_no)?;
                coverage = Some((value, v.to_string()));
            } else if let Some(v) = comment.strip_prefix(SYMMETRIC_DIRECTIVE) {
                symmetric = match v.trim() {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(LiLabError::Parse {
                            line: line_no,
                            reason: format!(
                                "symmetric directive expects true/false, got `{other}`"
                            ),
                        })
                    }
                };
            }
            continue;
        }

        let mut fields = line.split_whitespace();
        let text = fields.next().expect("nonempty line has a field");
        let gamma = parse_decimal(text, line_no)?;
        let multiplicity = match fields.next() {
            None => 1,
            Some(m) => match m.parse::<u32>() {
                Ok(m) if m >= 1 => m,
                _ => {
                    return Err(LiLabError::Parse {
                        line: line_no,
                        reason: format!("multiplicity must be a positive integer, got `{m}`"),
                    })
                }
            },
        };
        if let Some(extra) = fields.next() {
            return Err(LiLabError::Parse {
                line: line_no,
                reason: format!("unexpected trailing field `{extra}`"),
            });
        }
        if gamma == 0.0 || (symmetric && gamma < 0.0) {
            return Err(LiLabError::NonpositiveOrdinate {
                line: line_no,
                value: text.to_string(),
            });
        }
        if let Some(prev) = ordinates.last() {
            if gamma <= prev.gamma {
                return Err(LiLabError::Ordering {
                    line: line_no,
                    previous: prev.text.clone(),
                    current: text.to_string(),
                });
            }
        }
        ordinates.push(Ordinate {
            gamma,
            text: text.to_string(),
            multiplicity,
        });
    }

    let (coverage, coverage_text) = match coverage {
        Some(c) => c,
        None => {
            let max = ordinates
                .iter()
                .max_by(|a, b| a.gamma.abs().total_cmp(&b.gamma.abs()))
                .ok_or(LiLabError::EmptyTable)?;
            let text = max.text.trim_start_matches(['-', '+']).to_string();
            (max.gamma.abs(), text)
        }
    };
    ZeroTable::with_coverage_text(ordinates, coverage, coverage_text, symmetric)
}

fn parse_decimal(text: &str, line: usize) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(LiLabError::Parse {
            line,
            reason: format!("`{text}` is not a decimal number"),
        }),
    }
}

/// Write a table in the zero file format. Ordinates are written with their
/// original decimal text, so `parse_ordinates(&serialize_ordinates(t)) == t`.
pub fn serialize_ordinates(table: &ZeroTable) -> String {
    let mut out = String::with_capacity(table.len() * 20 + 64);
    out.push_str(&format!(
        "# {COVERAGE_DIRECTIVE} {}\n",
        table.coverage_text()
    ));
    if !table.symmetric() {
        out.push_str(&format!("# {SYMMETRIC_DIRECTIVE} false\n"));
    }
    for o in table.ordinates() {
        out.push_str(&o.text);
        if o.multiplicity != 1 {
            out.push(' ');
            out.push_str(&o.multiplicity.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn load_zero_file(path: impl AsRef<Path>) -> Result<ZeroTable> {
    parse_ordinates(&fs::read_to_string(path)?)
}

/// Where a zero table comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroSource {
    LocalFile {
        path: PathBuf,
    },
    RemoteLabel {
        label: String,
        requested_height: f64,
    },
}

impl ZeroSource {
    pub fn local(path: impl Into<PathBuf>) -> Self {
        ZeroSource::LocalFile { path: path.into() }
    }

    pub fn remote(label: impl Into<String>, requested_height: f64) -> Result<Self> {
        let label = label.into();
        validate_label(&label)?;
        if !requested_height.is_finite() || requested_height <= 0.0 {
            return Err(LiLabError::InvalidSource(format!(
                "requested height must be positive, got {requested_height}"
            )));
        }
        Ok(ZeroSource::RemoteLabel {
            label,
            requested_height,
        })
    }
}

/// Syntactic check of a database label such as `1-1-1.1-r0-0-0`: dash-separated
/// segments of ASCII alphanumerics and dots, starting with the degree.
pub fn validate_label(label: &str) -> Result<()> {
    let bad = |why: &str| Err(LiLabError::InvalidSource(format!("label `{label}`: {why}")));
    if label.is_empty() || label.len() > 128 {
        return bad("length must be 1..=128");
    }
    let mut segments = label.split('-');
    let degree = segments.next().unwrap_or_default();
    if degree.is_empty() || !degree.bytes().all(|b| b.is_ascii_digit()) {
        return bad("must start with a numeric degree segment");
    }
    for seg in segments {
        if seg.is_empty() || !seg.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'.') {
            return bad("segments may contain only letters, digits and dots");
        }
    }
    Ok(())
}

/// Cache file path for a `(label, height)` pair.
pub fn cache_path(cache_dir: &Path, label: &str, height: f64) -> PathBuf {
    cache_dir.join(format!("{label}__{height}.zeros"))
}

/// HTTP client for the remote zero lists.
#[derive(Debug, Clone)]
pub struct RemoteClient {
    base_url: String,
    max_attempts: u32,
    backoff: Duration,
    timeout: Duration,
}

impl Default for RemoteClient {
    fn default() -> Self {
        Self::new(DEFAULT_BASE_URL)
    }
}

impl RemoteClient {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            max_attempts: 3,
            backoff: Duration::from_millis(250),
            timeout: Duration::from_secs(30),
        }
    }

    /// Client using `LILAB_ZERO_BASE_URL` when set.
    pub fn from_env() -> Self {
        match std::env::var(BASE_URL_ENV) {
            Ok(url) if !url.is_empty() => Self::new(url),
            _ => Self::default(),
        }
    }

    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    fn url_for(&self, label: &str) -> String {
        format!(
            "{}/api/lfunc_lfunctions/?label={label}&_format=json&_fields=positive_zeros",
            self.base_url
        )
    }

    /// Resolve a zero source to a table, using and populating the cache for
    /// remote labels.
    pub fn load(&self, source: &ZeroSource, cache_dir: &Path) -> Result<ZeroTable> {
        match source {
            ZeroSource::LocalFile { path } => load_zero_file(path),
            ZeroSource::RemoteLabel {
                label,
                requested_height,
            } => self.fetch(label, *requested_height, cache_dir),
        }
    }

    /// Fetch the zero list for `label` up to `height`, serving from the cache
    /// when a valid entry exists.
    pub fn fetch(&self, label: &str, height: f64, cache_dir: &Path) -> Result<ZeroTable> {
        validate_label(label)?;
        fs::create_dir_all(cache_dir)?;
        let path = cache_path(cache_dir, label, height);
        if let Some(table) = read_cache(&path) {
            return Ok(table);
        }

        let _lock = CacheLock::acquire(cache_dir, label)?;
        if let Some(table) = read_cache(&path) {
            return Ok(table);
        }
        let body = self.get_with_retry(label)?;
        let text = zeros_text_from_response(&body, label, height)?;
        // Validate before anything touches the cache.
        let table = parse_ordinates(&text)?;
        write_atomically(cache_dir, &path, &text)?;
        Ok(table)
    }

    fn get_with_retry(&self, label: &str) -> Result<String> {
        let url = self.url_for(label);
        let agent = ureq::AgentBuilder::new().timeout(self.timeout).build();
        let mut attempt = 0;
        loop {
            attempt += 1;
            match self.get_once(&agent, &url, label) {
                Err(e) if e.is_retryable() && attempt < self.max_attempts => {
                    log::warn!("fetch of `{label}` failed (attempt {attempt}): {e}");
                    thread::sleep(self.backoff * 2u32.pow(attempt - 1));
                }
                other => return other,
            }
        }
    }

    fn get_once(&self, agent: &ureq::Agent, url: &str, label: &str) -> Result<String> {
        match agent.get(url).call() {
            Ok(resp) => resp
                .into_string()
                .map_err(|e| LiLabError::MalformedResponse(format!("reading body: {e}"))),
            Err(ureq::Error::Status(404, _)) => Err(LiLabError::LabelNotFound(label.to_string())),
            Err(ureq::Error::Status(code, _)) if code >= 500 || code == 429 => Err(
                LiLabError::Network(format!("server returned status {code}")),
            ),
            Err(ureq::Error::Status(code, _)) => Err(LiLabError::MalformedResponse(format!(
                "unexpected status {code}"
            ))),
            Err(ureq::Error::Transport(t)) => Err(LiLabError::Network(t.to_string())),
        }
    }
}

/// Fetch through a client configured from the environment.
pub fn fetch_remote_zeros(source: &ZeroSource, cache_dir: &Path) -> Result<ZeroTable> {
    RemoteClient::from_env().load(source, cache_dir)
}

#[derive(Deserialize)]
struct ApiResponse<'a> {
    #[serde(borrow)]
    data: Vec<ApiRow<'a>>,
}

#[derive(Deserialize)]
struct ApiRow<'a> {
    #[serde(borrow)]
    positive_zeros: Option<Vec<&'a RawValue>>,
}

/// Convert an API response body to the zero file format, keeping the decimal
/// text of every ordinate up to `height`.
fn zeros_text_from_response(body: &str, label: &str, height: f64) -> Result<String> {
    let resp: ApiResponse<'_> = serde_json::from_str(body)
        .map_err(|e| LiLabError::MalformedResponse(format!("invalid JSON: {e}")))?;
    let row = match resp.data.first() {
        Some(row) => row,
        None => return Err(LiLabError::LabelNotFound(label.to_string())),
    };
    let zeros = row
        .positive_zeros
        .as_ref()
        .ok_or_else(|| LiLabError::MalformedResponse("missing positive_zeros".into()))?;
    if zeros.is_empty() {
        return Err(LiLabError::MalformedResponse("empty zero list".into()));
    }

    let mut lines = Vec::with_capacity(zeros.len());
    let mut last = 0.0;
    let mut beyond = false;
    for raw in zeros {
        let text = raw.get().trim().trim_matches('"');
        let value: f64 = text
            .parse()
            .map_err(|_| LiLabError::MalformedResponse(format!("bad ordinate `{text}`")))?;
        if value > height {
            beyond = true;
            break;
        }
        last = value;
        lines.push(text.to_string());
    }
    if lines.is_empty() {
        return Err(LiLabError::MalformedResponse(format!(
            "no ordinates at or below {height}"
        )));
    }
    // The list is contiguous from the bottom, so it certifies completeness up
    // to the requested height only if it continues past it.
    let coverage = if beyond {
        format!("{height}")
    } else {
        lines.last().cloned().unwrap_or_default()
    };
    debug_assert!(last > 0.0);
    let mut out =
        format!("# {label} zeros from remote database\n# {COVERAGE_DIRECTIVE} {coverage}\n");
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    Ok(out)
}

fn read_cache(path: &Path) -> Option<ZeroTable> {
    let text = fs::read_to_string(path).ok()?;
    match parse_ordinates(&text) {
        Ok(t) => Some(t),
        Err(e) => {
            log::warn!("ignoring invalid cache entry {}: {e}", path.display());
            None
        }
    }
}

fn write_atomically(dir: &Path, path: &Path, text: &str) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| LiLabError::Io(e.error))?;
    Ok(())
}

/// Per-label lock file serializing fetches of the same label.
struct CacheLock {
    path: PathBuf,
}

impl CacheLock {
    const WAIT: Duration = Duration::from_secs(120);

    fn acquire(dir: &Path, label: &str) -> Result<Self> {
        let path = dir.join(format!("{label}.lock"));
        let start = Instant::now();
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(_) => return Ok(Self { path }),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    if start.elapsed() > Self::WAIT {
                        return Err(LiLabError::Io(std::io::Error::new(
                            std::io::ErrorKind::TimedOut,
                            format!("timed out waiting for {}", path.display()),
                        )));
                    }
                    thread::sleep(Duration::from_millis(20));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_plain_list() {
        let t = parse_ordinates("14.134725\n21.022040\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.coverage_height(), 21.022040);
        assert!(t.symmetric());
    }

    #[test]
    fn comment_and_multiplicity() {
        let t = parse_ordinates("# header\n14.1 2\n").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.ordinates()[0].multiplicity, 2);
    }

    #[test]
    fn ordering_violation_reports_line() {
        match parse_ordinates("5.0\n3.0\n") {
            Err(LiLabError::Ordering { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_lines_are_rejected() {
        assert!(matches!(
            parse_ordinates("1.0\nabc\n"),
            Err(LiLabError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_ordinates("-1.0\n"),
            Err(LiLabError::NonpositiveOrdinate { line: 1, .. })
        ));
        assert!(matches!(
            parse_ordinates("0\n"),
            Err(LiLabError::NonpositiveOrdinate { .. })
        ));
        assert!(matches!(
            parse_ordinates("1.0 0\n"),
            Err(LiLabError::Parse { .. })
        ));
        assert!(matches!(
            parse_ordinates("# nothing\n"),
            Err(LiLabError::EmptyTable)
        ));
    }

    #[test]
    fn directives() {
        let t =
            parse_ordinates("# coverage_height: 30\n# symmetric: false\n-12.5\n14.1\n").unwrap();
        assert_eq!(t.coverage_height(), 30.0);
        assert!(!t.symmetric());
        assert!(parse_ordinates("# coverage_height: 10\n14.1\n").is_err());
    }

    #[test]
    fn label_grammar() {
        assert!(validate_label("1-1-1.1-r0-0-0").is_ok());
        assert!(validate_label("2-11-1.1-c0-0-0").is_ok());
        assert!(validate_label("").is_err());
        assert!(validate_label("../etc").is_err());
        assert!(validate_label("x-1").is_err());
        assert!(validate_label("1--2").is_err());
        assert!(validate_label("1-a/b").is_err());
    }

    #[test]
    fn response_conversion_keeps_text_and_sets_coverage() {
        let body = r#"{"data":[{"positive_zeros":[14.134725141734693, "21.02203963877155", 25.0108575801]}]}"#;
        let text = zeros_text_from_response(body, "1-1-1.1-r0-0-0", 22.0).unwrap();
        let t = parse_ordinates(&text).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.coverage_height(), 22.0);
        assert_eq!(t.ordinates()[1].text, "21.02203963877155");

        let text = zeros_text_from_response(body, "1-1-1.1-r0-0-0", 100.0).unwrap();
        assert_eq!(
            parse_ordinates(&text).unwrap().coverage_height(),
            25.0108575801
        );

        assert!(matches!(
            zeros_text_from_response(r#"{"data":[]}"#, "9-9", 1.0),
            Err(LiLabError::LabelNotFound(_))
        ));
        assert!(matches!(
            zeros_text_from_response(r#"{"data":[{"positive_zeros":[1.0,"#, "9-9", 1.0),
            Err(LiLabError::MalformedResponse(_))
        ));
    }

    fn ordinate_strings() -> impl Strategy<Value = Vec<(String, u32)>> {
        prop::collection::vec((1u32..1_000_000, 0u32..10_000_000, 1u32..4), 1..50).prop_map(|v| {
            let mut acc = 0u64;
            v.into_iter()
                .map(|(step, frac, m)| {
                    acc += u64::from(step);
                    (format!("{acc}.{frac:07}"), m)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(entries in ordinate_strings()) {
            let text: String = entries
                .iter()
                .map(|(s, m)| format!("{s} {m}\n"))
                .collect();
            let t = parse_ordinates(&text).unwrap();
            let again = parse_ordinates(&serialize_ordinates(&t)).unwrap();
            prop_assert_eq!(&t, &again);
            for (o, (s, _)) in again.ordinates().iter().zip(&entries) {
                prop_assert_eq!(&o.text, s);
            }
        }
    }
}
