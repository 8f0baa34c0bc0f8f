//! Built-in p-group catalog and presentation file loading.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use forge_core::{parse_presentation, AbelianInvariants, Presentation};
use serde::Serialize;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// A theorem about the constructions.
    Theory,
    /// Immediate from definitions.
    Definition,
    /// Computed by an independent oracle.
    Oracle,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub p: Option<u64>,
    pub presentation: Presentation,
    pub expected_order: Option<usize>,
    pub expected_h2: Option<(AbelianInvariants, Basis)>,
}

struct Builtin {
    name: &'static str,
    p: u64,
    text: &'static str,
    order: usize,
    h2: Option<&'static [u64]>,
}

// Expected multipliers: exterior-square closed form for the abelian
// entries, bar-resolution oracle for D8 and Q8.
const BUILTIN: &[Builtin] = &[
    Builtin {
        name: "C2",
        p: 2,
        text: "gens a; rels a^2",
        order: 2,
        h2: Some(&[]),
    },
    Builtin {
        name: "C3",
        p: 3,
        text: "gens a; rels a^3",
        order: 3,
        h2: Some(&[]),
    },
    Builtin {
        name: "C4",
        p: 2,
        text: "gens a; rels a^4",
        order: 4,
        h2: Some(&[]),
    },
    Builtin {
        name: "C8",
        p: 2,
        text: "gens a; rels a^8",
        order: 8,
        h2: Some(&[]),
    },
    Builtin {
        name: "C9",
        p: 3,
        text: "gens a; rels a^9",
        order: 9,
        h2: Some(&[]),
    },
    Builtin {
        name: "C2xC2",
        p: 2,
        text: "gens a, b; rels a^2, b^2, [a,b]",
        order: 4,
        h2: Some(&[2]),
    },
    Builtin {
        name: "C2xC4",
        p: 2,
        text: "gens a, b; rels a^2, b^4, [a,b]",
        order: 8,
        h2: Some(&[2]),
    },
    Builtin {
        name: "D8",
        p: 2,
        text: "gens a, b; rels a^4, b^2, (a*b)^2",
        order: 8,
        h2: Some(&[2]),
    },
    Builtin {
        name: "Q8",
        p: 2,
        text: "gens a, b; rels a^4, a^2*b^-2, a^b*a",
        order: 8,
        h2: Some(&[]),
    },
    Builtin {
        name: "C3xC3",
        p: 3,
        text: "gens a, b; rels a^3, b^3, [a,b]",
        order: 9,
        h2: Some(&[3]),
    },
    Builtin {
        name: "Heis27",
        p: 3,
        text: "gens a, b, c; rels a^3, b^3, c^3, [a,b]*c^-1, [a,c], [b,c]",
        order: 27,
        h2: None,
    },
    Builtin {
        name: "Mod27",
        p: 3,
        text: "gens a, b; rels a^9, b^3, b^-1*a*b*a^-4",
        order: 27,
        h2: None,
    },
];

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    BUILTIN
        .iter()
        .map(|b| {
            let presentation = parse_presentation(b.text)
                .expect("builtin presentation parses")
                .with_name(b.name);
            CatalogEntry {
                name: b.name.to_string(),
                p: Some(b.p),
                presentation,
                expected_order: Some(b.order),
                expected_h2: b.h2.map(|h| {
                    (
                        AbelianInvariants::from_cyclic_orders(h.iter().copied()),
                        Basis::Oracle,
                    )
                }),
            }
        })
        .collect()
}

pub fn find_builtin(name: &str) -> Option<CatalogEntry> {
    builtin_catalog().into_iter().find(|e| e.name == name)
}

/// An entry read from presentation text. The name is the `group` line, or
/// `fallback` when there is none.
pub fn entry_from_text(text: &str, fallback: &str) -> Result<CatalogEntry> {
    let presentation = parse_presentation(text)?;
    let name = presentation
        .name
        .clone()
        .unwrap_or_else(|| fallback.to_string());
    Ok(CatalogEntry {
        name: name.clone(),
        p: None,
        presentation: presentation.with_name(name),
        expected_order: None,
        expected_h2: None,
    })
}

pub fn load_file(path: &Path) -> Result<CatalogEntry> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("bad file name {}", path.display()))?;
    entry_from_text(&text, stem).with_context(|| format!("parsing {}", path.display()))
}

/// Every `*.pres` file in `dir`, by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<CatalogEntry>> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading catalog directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pres"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no .pres files in {}", dir.display());
    }
    paths.iter().map(|p| load_file(p)).collect()
}

/// `catalog:NAME` or a presentation file path.
pub fn load_target(arg: &str) -> Result<CatalogEntry> {
    match arg.strip_prefix("catalog:") {
        Some(name) => find_builtin(name).ok_or_else(|| {
            let names: Vec<String> = builtin_catalog().into_iter().map(|e| e.name).collect();
            anyhow!(
                "unknown catalog entry `{name}` (known: {})",
                names.join(", ")
            )
        }),
        None => load_file(Path::new(arg)),
    }
}

/// `builtin` or a directory of presentation files.
pub fn load_catalog(spec: &str) -> Result<Vec<CatalogEntry>> {
    if spec == "builtin" {
        Ok(builtin_catalog())
    } else {
        load_dir(Path::new(spec))
    }
}
