//! Category input: a file in the text format or a `--gen` spec.

use std::fs;
use std::path::Path;

use frobcat::corpus;
use frobcat::FinCategory;

fn count(tok: &str, what: &str) -> Result<usize, String> {
    tok.parse().map_err(|_| format!("{what}: expected a non-negative integer, got `{tok}`"))
}

/// Builds the category named by a generator spec such as `cyclic:3` or
/// `adjoin-unit:cyclic:2`.
pub fn generate(spec: &str) -> Result<FinCategory, String> {
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    match (head, arg) {
        ("cyclic", Some(n)) => FinCategory::from_group_cyclic(count(n, spec)?).map_err(|e| e.to_string()),
        ("discrete", Some(n)) => Ok(FinCategory::discrete(count(n, spec)?)),
        ("arrow", None) => Ok(FinCategory::arrow()),
        ("parallel", Some(k)) => Ok(FinCategory::parallel(count(k, spec)?)),
        ("idmon", None) => Ok(FinCategory::idempotent_monoid()),
        ("adjoin-unit", Some(inner)) => FinCategory::adjoin_unit(&generate(inner)?).map_err(|e| e.to_string()),
        ("monoid-table", Some(path)) => monoid_table(Path::new(path)),
        ("corpus", Some(name)) => corpus::find(name).ok_or_else(|| format!("no corpus category `{name}`")),
        _ => Err(format!("unknown generator `{spec}`")),
    }
}

/// Reads a monoid given as a line of element names followed by one row of
/// names per element; row `a`, column `b` is `a ∘ b`. The first name is the
/// unit.
pub fn monoid_table(path: &Path) -> Result<FinCategory, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_monoid_table(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_monoid_table(text: &str) -> Result<FinCategory, String> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let names: Vec<&str> = lines.next().ok_or("empty monoid table")?.split_whitespace().collect();
    let mut table = Vec::with_capacity(names.len());
    for (a, line) in lines.enumerate() {
        let row = line
            .split_whitespace()
            .map(|t| names.iter().position(|n| *n == t).ok_or_else(|| format!("unknown element `{t}`")))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != names.len() {
            return Err(format!("row {} has {} entries, expected {}", a + 1, row.len(), names.len()));
        }
        table.push(row);
    }
    if table.len() != names.len() {
        return Err(format!("{} rows for {} elements", table.len(), names.len()));
    }
    FinCategory::from_monoid_table(&names, &table).map_err(|e| e.to_string())
}

/// Loads the category without enforcing the category laws.
pub fn load_unchecked(file: Option<&Path>, gen: Option<&str>) -> Result<FinCategory, String> {
    match (file, gen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            FinCategory::parse_unchecked(&text).map_err(|e| format!("{}: {e}", path.display()))
        }
        (None, Some(spec)) => generate(spec),
        _ => Err("give exactly one of <FILE> and --gen".into()),
    }
}

/// Loads the category and rejects it if it violates the category laws.
pub fn load(file: Option<&Path>, gen: Option<&str>) -> Result<FinCategory, String> {
    let cat = load_unchecked(file, gen)?;
    let report = cat.validate();
    if report.is_valid() {
        Ok(cat)
    } else {
        Err(format!("not a category:\n{report}"))
    }
}
