use std::path::PathBuf;

use clap::Args;

use covertour::{generate, parse_digraph, Digraph, Error, Family};

use crate::Failure;

/// Where the graph comes from: a file or one of the generators.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Graph file (`n` on the first line, then `e u v` / `b u v` lines).
    file: Option<PathBuf>,
    /// Bidirected cycle on N vertices.
    #[arg(long, value_name = "N")]
    cycle: Option<usize>,
    /// Complete digraph on N vertices.
    #[arg(long, value_name = "N")]
    complete: Option<usize>,
    /// Bidirected path on N vertices.
    #[arg(long, value_name = "N")]
    path: Option<usize>,
    /// Family name followed by a size, e.g. `directed-cycle3`, `cycle5`.
    #[arg(long, value_name = "KIND")]
    r#gen: Option<String>,
}

impl GraphSource {
    pub fn load(&self) -> Result<Digraph, Failure> {
        let generated = |kind, n| generate(kind, n).map_err(Failure::Lib);
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            return parse_digraph(&text).map_err(|e| Failure::Lib(Error::from(e)));
        }
        if let Some(n) = self.cycle {
            return generated(Family::Cycle, n);
        }
        if let Some(n) = self.complete {
            return generated(Family::Complete, n);
        }
        if let Some(n) = self.path {
            return generated(Family::Path, n);
        }
        let spec = self.r#gen.as_deref().expect("clap requires one source");
        let split = spec.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (name, digits) = spec.split_at(split);
        let n = digits
            .parse()
            .map_err(|_| Failure::Usage(format!("`{spec}` should end in a vertex count")))?;
        let kind: Family = name.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
        generated(kind, n)
    }
}
