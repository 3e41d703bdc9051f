//! JSON documents for spaces, measures, and groups, plus atomic file
//! writes.
//!
//! Serialization is canonical: struct fields in declaration order, atoms
//! sorted by their label sequences, rationals in lowest terms. Saving the
//! same value twice yields identical bytes, which the CLI's determinism
//! guarantees rest on.

use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::PathMeasure;
use crate::space::{Path, PathSpace, StateSpace, Time, TimeGrid};
use crate::weight::{Exact, Mode, Weight};
use crate::FiniteGroup;

pub fn parse_time(s: &str) -> Result<Time> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a rational like 3/4, got '{s}'")))
}

/// On-disk form of a path space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    /// Strictly increasing rationals, e.g. ["0", "1/2", "1"].
    pub grid: Vec<String>,
    pub states: Vec<String>,
    /// Symmetric nonnegative rational distances, zero on the diagonal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    /// Speed limit for admissibility; requires a metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_bound: Option<String>,
    #[serde(default)]
    pub cyclic: bool,
}

pub fn space_from_doc(doc: &SpaceDoc) -> Result<PathSpace> {
    let times = doc.grid.iter().map(|s| parse_time(s)).collect::<Result<Vec<_>>>()?;
    let grid = TimeGrid::new(times)?;
    let states = match &doc.metric {
        Some(rows) => {
            let metric = rows
                .iter()
                .map(|row| row.iter().map(|s| parse_time(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            StateSpace::with_metric(doc.states.clone(), metric)?
        }
        None => StateSpace::new(doc.states.clone())?,
    };
    let bound = doc.step_bound.as_deref().map(parse_time).transpose()?;
    PathSpace::new(grid, states, bound, doc.cyclic)
}

pub fn space_to_doc(space: &PathSpace) -> SpaceDoc {
    SpaceDoc {
        grid: space.grid().times().iter().map(|t| t.to_string()).collect(),
        states: space.states().labels().to_vec(),
        metric: space.states().metric().map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|d| d.to_string()).collect())
                .collect()
        }),
        step_bound: space.step_bound().map(|b| b.to_string()),
        cyclic: space.is_cyclic(),
    }
}

/// A measure document carries its space inline or points at a space file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(String),
    Inline(SpaceDoc),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    /// State labels, one per grid point.
    pub path: Vec<String>,
    /// "p/q" string in exact mode, JSON number in float mode.
    pub weight: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub space: SpaceRef,
    /// "exact" or "float".
    pub mode: String,
    pub atoms: Vec<AtomDoc>,
}

/// A path measure in either arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMeasure {
    Exact(PathMeasure<Exact>),
    Float(PathMeasure<f64>),
}

impl AnyMeasure {
    pub fn mode(&self) -> Mode {
        match self {
            AnyMeasure::Exact(_) => Mode::Exact,
            AnyMeasure::Float(_) => Mode::Float,
        }
    }

    pub fn space(&self) -> &Arc<PathSpace> {
        match self {
            AnyMeasure::Exact(m) => m.space(),
            AnyMeasure::Float(m) => m.space(),
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            AnyMeasure::Exact(m) => m.atom_count(),
            AnyMeasure::Float(m) => m.atom_count(),
        }
    }

    pub fn total_mass_string(&self) -> String {
        match self {
            AnyMeasure::Exact(m) => m.total_mass().to_string(),
            AnyMeasure::Float(m) => m.total_mass().to_string(),
        }
    }
}

fn atoms_from_doc<W: Weight>(
    doc: &MeasureDoc,
    space: &Arc<PathSpace>,
) -> Result<PathMeasure<W>> {
    let mut atoms = Vec::with_capacity(doc.atoms.len());
    for atom in &doc.atoms {
        let states = atom
            .path
            .iter()
            .map(|label| {
                space
                    .states()
                    .index_of(label)
                    .ok_or_else(|| Error::UnknownLabel(label.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        atoms.push((Path::new(states), W::from_json(&atom.weight)?));
    }
    PathMeasure::new(space.clone(), atoms)
}

/// Build a measure from its document; `base_dir` anchors a relative space
/// path reference.
pub fn measure_from_doc(doc: &MeasureDoc, base_dir: Option<&FsPath>) -> Result<AnyMeasure> {
    let space = match &doc.space {
        SpaceRef::Inline(sd) => Arc::new(space_from_doc(sd)?),
        SpaceRef::Path(rel) => {
            let mut path = PathBuf::from(rel);
            if path.is_relative() {
                if let Some(dir) = base_dir {
                    path = dir.join(path);
                }
            }
            load_space(&path)?
        }
    };
    let mode = Mode::parse(&doc.mode)?;
    Ok(match mode {
        Mode::Exact => AnyMeasure::Exact(atoms_from_doc(doc, &space)?),
        Mode::Float => AnyMeasure::Float(atoms_from_doc(doc, &space)?),
    })
}

fn atoms_to_doc<W: Weight>(m: &PathMeasure<W>) -> Vec<AtomDoc> {
    let space = m.space();
    let mut atoms: Vec<AtomDoc> = m
        .atoms()
        .map(|(p, w)| AtomDoc {
            path: p.states().iter().map(|&x| space.states().label(x).to_string()).collect(),
            weight: w.to_json(),
        })
        .collect();
    atoms.sort_by(|a, b| a.path.cmp(&b.path));
    atoms
}

/// Serialize with the space inlined, atoms sorted by label sequence.
pub fn measure_to_doc(m: &AnyMeasure) -> MeasureDoc {
    let space = SpaceRef::Inline(space_to_doc(m.space()));
    let (mode, atoms) = match m {
        AnyMeasure::Exact(m) => (Mode::Exact, atoms_to_doc(m)),
        AnyMeasure::Float(m) => (Mode::Float, atoms_to_doc(m)),
    };
    MeasureDoc { space, mode: mode.to_string(), atoms }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub fn group_from_doc(doc: &GroupDoc) -> Result<FiniteGroup> {
    if doc.table.len() != doc.order {
        return Err(Error::Parse(format!(
            "group order {} does not match table size {}",
            doc.order,
            doc.table.len()
        )));
    }
    FiniteGroup::new(doc.table.clone(), doc.labels.clone())
}

pub fn group_to_doc(group: &FiniteGroup) -> GroupDoc {
    GroupDoc {
        order: group.order(),
        table: group.table().to_vec(),
        labels: Some(group.labels().to_vec()),
    }
}

/// Pretty JSON with a trailing newline; the crate's one serialization form.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Write-then-rename so readers never observe a half-written file.
pub fn atomic_write(path: &FsPath, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(FsPath::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, contents)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn load_space(path: &FsPath) -> Result<Arc<PathSpace>> {
    let text = std::fs::read_to_string(path)?;
    let doc: SpaceDoc = serde_json::from_str(&text)?;
    Ok(Arc::new(space_from_doc(&doc)?))
}

pub fn save_space(path: &FsPath, space: &PathSpace) -> Result<()> {
    atomic_write(path, to_canonical_json(&space_to_doc(space))?.as_bytes())
}

pub fn load_measure(path: &FsPath) -> Result<AnyMeasure> {
    let text = std::fs::read_to_string(path)?;
    let doc: MeasureDoc = serde_json::from_str(&text)?;
    measure_from_doc(&doc, path.parent())
}

pub fn save_measure(path: &FsPath, m: &AnyMeasure) -> Result<()> {
    atomic_write(path, to_canonical_json(&measure_to_doc(m))?.as_bytes())
}

pub fn load_group(path: &FsPath) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    let doc: GroupDoc = serde_json::from_str(&text)?;
    group_from_doc(&doc)
}

pub fn save_group(path: &FsPath, group: &FiniteGroup) -> Result<()> {
    atomic_write(path, to_canonical_json(&group_to_doc(group))?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metric_space_doc() -> SpaceDoc {
        SpaceDoc {
            grid: vec!["0".into(), "1/2".into(), "1".into()],
            states: vec!["a".into(), "b".into(), "c".into()],
            metric: Some(vec![
                vec!["0".into(), "1".into(), "1".into()],
                vec!["1".into(), "0".into(), "1".into()],
                vec!["1".into(), "1".into(), "0".into()],
            ]),
            step_bound: Some("2".into()),
            cyclic: true,
        }
    }

    #[test]
    fn space_docs_round_trip() {
        let doc = metric_space_doc();
        let space = space_from_doc(&doc).unwrap();
        assert_eq!(space_to_doc(&space), doc);
        let again = space_from_doc(&space_to_doc(&space)).unwrap();
        assert_eq!(again, space);
    }

    #[test]
    fn bad_rationals_are_parse_errors() {
        let mut doc = metric_space_doc();
        doc.grid[1] = "half".into();
        assert!(matches!(space_from_doc(&doc), Err(Error::Parse(_))));
    }

    #[test]
    fn measure_docs_round_trip_in_both_modes() {
        let space = SpaceRef::Inline(SpaceDoc {
            grid: vec!["0".into(), "1".into(), "2".into()],
            states: vec!["a".into(), "b".into()],
            metric: None,
            step_bound: None,
            cyclic: false,
        });
        let exact = MeasureDoc {
            space: space.clone(),
            mode: "exact".into(),
            atoms: vec![
                AtomDoc {
                    path: vec!["a".into(), "a".into(), "a".into()],
                    weight: serde_json::json!("1/2"),
                },
                AtomDoc {
                    path: vec!["b".into(), "a".into(), "b".into()],
                    weight: serde_json::json!("1/2"),
                },
            ],
        };
        let m = measure_from_doc(&exact, None).unwrap();
        assert_eq!(m.mode(), Mode::Exact);
        assert_eq!(measure_to_doc(&m), exact);
        let float = MeasureDoc {
            space,
            mode: "float".into(),
            atoms: vec![AtomDoc {
                path: vec!["a".into(), "b".into(), "a".into()],
                weight: serde_json::json!(0.25),
            }],
        };
        let m = measure_from_doc(&float, None).unwrap();
        assert_eq!(m.mode(), Mode::Float);
        assert_eq!(measure_to_doc(&m), float);
    }

    #[test]
    fn exact_mode_rejects_fractional_numbers() {
        let doc = MeasureDoc {
            space: SpaceRef::Inline(SpaceDoc {
                grid: vec!["0".into(), "1".into()],
                states: vec!["a".into(), "b".into()],
                metric: None,
                step_bound: None,
                cyclic: false,
            }),
            mode: "exact".into(),
            atoms: vec![AtomDoc {
                path: vec!["a".into(), "b".into()],
                weight: serde_json::json!(0.5),
            }],
        };
        assert!(measure_from_doc(&doc, None).is_err());
    }

    #[test]
    fn unknown_labels_are_reported() {
        let doc = MeasureDoc {
            space: SpaceRef::Inline(SpaceDoc {
                grid: vec!["0".into(), "1".into()],
                states: vec!["a".into(), "b".into()],
                metric: None,
                step_bound: None,
                cyclic: false,
            }),
            mode: "exact".into(),
            atoms: vec![AtomDoc {
                path: vec!["a".into(), "z".into()],
                weight: serde_json::json!("1"),
            }],
        };
        assert!(matches!(measure_from_doc(&doc, None), Err(Error::UnknownLabel(l)) if l == "z"));
    }

    #[test]
    fn saving_twice_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let space = Arc::new(space_from_doc(&metric_space_doc()).unwrap());
        let m = PathMeasure::<Exact>::new(
            space,
            [
                (Path::new(vec![2, 1, 0]), <Exact as Weight>::ratio(1, 3)),
                (Path::new(vec![0, 1, 2]), <Exact as Weight>::ratio(2, 3)),
            ],
        )
        .unwrap();
        let m = AnyMeasure::Exact(m);
        let p1 = dir.path().join("m1.json");
        let p2 = dir.path().join("m2.json");
        save_measure(&p1, &m).unwrap();
        let reloaded = load_measure(&p1).unwrap();
        assert_eq!(reloaded, m);
        save_measure(&p2, &reloaded).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn measures_can_reference_a_space_file() {
        let dir = tempfile::tempdir().unwrap();
        let space = space_from_doc(&metric_space_doc()).unwrap();
        save_space(&dir.path().join("space.json"), &space).unwrap();
        let doc = MeasureDoc {
            space: SpaceRef::Path("space.json".into()),
            mode: "float".into(),
            atoms: vec![AtomDoc {
                path: vec!["a".into(), "a".into(), "a".into()],
                weight: serde_json::json!(1.0),
            }],
        };
        let mpath = dir.path().join("measure.json");
        atomic_write(&mpath, to_canonical_json(&doc).unwrap().as_bytes()).unwrap();
        let m = load_measure(&mpath).unwrap();
        assert_eq!(m.space().as_ref(), &space);
    }

    #[test]
    fn group_docs_round_trip() {
        let s3 = FiniteGroup::symmetric3();
        let doc = group_to_doc(&s3);
        assert_eq!(group_from_doc(&doc).unwrap(), s3);
        let mut bad = doc.clone();
        bad.order = 5;
        assert!(matches!(group_from_doc(&bad), Err(Error::Parse(_))));
    }

    #[test]
    fn atomic_write_replaces_existing_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        atomic_write(&path, b"first").unwrap();
        atomic_write(&path, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
    }
}
