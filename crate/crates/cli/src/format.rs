//! The JSON structure file.
//!
//! ```json
//! {
//!   "name": "chain2",
//!   "elements": ["0", "1"],
//!   "bot": "0",
//!   "top": "1",
//!   "order": [["0", "1"]],
//!   "times":    { "0": ["0", "0"], "1": ["0", "1"] },
//!   "residuum": { "0": ["1", "1"], "1": ["0", "1"] }
//! }
//! ```
//!
//! `order` is either a list of pairs `[x, y]` with `x <= y` (covering pairs are
//! enough, the closure is taken) or a square boolean matrix in `elements` order.
//! Tables map each row element to its row, columns in `elements` order.
//! `join` and `meet` may replace `order`; when both are present they must
//! agree. A missing `residuum` is derived from `times`.

use std::collections::HashMap;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use reslat::modelgen::BoundedLattice;
use reslat::structure::lattice_ops_from_order;
use reslat::{ElemId, OpTable, Structure};

pub type Table = IndexMap<String, Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Order {
    Pairs(Vec<[String; 2]>),
    Matrix(Vec<Vec<bool>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub name: String,
    pub elements: Vec<String>,
    pub bot: String,
    pub top: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Order>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meet: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuum: Option<Table>,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed structure file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Structure(#[from] reslat::Error),
}

type Result<T> = std::result::Result<T, FormatError>;

fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(FormatError::Malformed(msg.into()))
}

impl StructureFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The file form of a structure: order as covering pairs, times and residuum.
    pub fn from_structure(name: &str, s: &Structure) -> Self {
        let table = |t: &OpTable| -> Table {
            s.elems()
                .map(|x| {
                    let row = s.elems().map(|y| s.name(t.get(x, y)).to_string()).collect();
                    (s.name(x).to_string(), row)
                })
                .collect()
        };
        StructureFile {
            name: name.to_string(),
            elements: s.names().to_vec(),
            bot: s.name(s.bot()).to_string(),
            top: s.name(s.top()).to_string(),
            order: Some(Order::Pairs(
                s.covers()
                    .into_iter()
                    .map(|(x, y)| [s.name(x).to_string(), s.name(y).to_string()])
                    .collect(),
            )),
            join: None,
            meet: None,
            times: Some(table(s.times_table())),
            residuum: Some(table(s.residuum_table())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    fn index(&self) -> Result<HashMap<&str, usize>> {
        let mut idx = HashMap::new();
        for (i, e) in self.elements.iter().enumerate() {
            if idx.insert(e.as_str(), i).is_some() {
                return malformed(format!("element `{e}` listed twice"));
            }
        }
        Ok(idx)
    }

    fn elem(idx: &HashMap<&str, usize>, name: &str, ctx: &str) -> Result<usize> {
        idx.get(name)
            .copied()
            .ok_or_else(|| FormatError::Malformed(format!("unknown element `{name}` in {ctx}")))
    }

    fn table(&self, idx: &HashMap<&str, usize>, t: &Table, what: &str) -> Result<OpTable> {
        let n = self.elements.len();
        if let Some(k) = t.keys().find(|k| !idx.contains_key(k.as_str())) {
            return malformed(format!("unknown element `{k}` in {what}"));
        }
        let mut rows = Vec::with_capacity(n);
        for e in &self.elements {
            let Some(row) = t.get(e) else {
                return malformed(format!("{what} has no row for `{e}`"));
            };
            if row.len() != n {
                return malformed(format!(
                    "{what} row `{e}` has {} entries, expected {n}",
                    row.len()
                ));
            }
            rows.push(
                row.iter()
                    .map(|v| Self::elem(idx, v, &format!("{what} row `{e}`")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(OpTable::from_rows(&rows)?)
    }

    fn leq_matrix(&self, idx: &HashMap<&str, usize>, order: &Order) -> Result<Vec<Vec<bool>>> {
        let n = self.elements.len();
        match order {
            Order::Matrix(m) => {
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return malformed(format!("order matrix must be {n}x{n}"));
                }
                Ok(m.clone())
            }
            Order::Pairs(pairs) => {
                let mut leq = vec![vec![false; n]; n];
                for (i, row) in leq.iter_mut().enumerate() {
                    row[i] = true;
                }
                for [x, y] in pairs {
                    let (x, y) = (Self::elem(idx, x, "order")?, Self::elem(idx, y, "order")?);
                    leq[x][y] = true;
                }
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            if leq[i][k] && leq[k][j] {
                                leq[i][j] = true;
                            }
                        }
                    }
                }
                Ok(leq)
            }
        }
    }

    fn lattice_tables(&self, idx: &HashMap<&str, usize>) -> Result<(OpTable, OpTable)> {
        let from_order = match &self.order {
            Some(o) => Some(lattice_ops_from_order(&self.leq_matrix(idx, o)?)?),
            None => None,
        };
        let from_tables = match (&self.join, &self.meet) {
            (Some(j), Some(m)) => Some((self.table(idx, j, "join")?, self.table(idx, m, "meet")?)),
            (None, None) => None,
            _ => return malformed("join and meet must be given together"),
        };
        match (from_order, from_tables) {
            (Some(a), Some(b)) if a != b => malformed("order disagrees with the join/meet tables"),
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => malformed("either order or join and meet must be given"),
        }
    }

    fn constants(&self, idx: &HashMap<&str, usize>) -> Result<(ElemId, ElemId)> {
        Ok((
            ElemId(Self::elem(idx, &self.bot, "bot")?),
            ElemId(Self::elem(idx, &self.top, "top")?),
        ))
    }

    /// Builds the structure. Checks shapes and names only; the axioms are
    /// left to `validate_structure`.
    pub fn to_structure(&self) -> Result<Structure> {
        let idx = self.index()?;
        let (bot, top) = self.constants(&idx)?;
        let (join, meet) = self.lattice_tables(&idx)?;
        let Some(times) = &self.times else {
            return malformed("times table is missing");
        };
        let times = self.table(&idx, times, "times")?;
        let names = self.elements.clone();
        Ok(match &self.residuum {
            Some(r) => {
                let r = self.table(&idx, r, "residuum")?;
                Structure::new(names, join, meet, times, r, bot, top)?
            }
            None => Structure::with_derived_residuum(names, join, meet, times, bot, top)?,
        })
    }

    /// The bounded lattice described by the file; `times` and `residuum` are ignored.
    pub fn to_lattice(&self) -> Result<BoundedLattice> {
        let idx = self.index()?;
        let (bot, top) = self.constants(&idx)?;
        let (join, meet) = self.lattice_tables(&idx)?;
        Ok(BoundedLattice {
            names: self.elements.clone(),
            join,
            meet,
            bot,
            top,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use reslat::examples;

    #[test]
    fn round_trip_through_file_form() {
        for s in [examples::a6(), examples::chain2(), examples::chain3_luk()] {
            let f = StructureFile::from_structure("x", &s);
            let back = StructureFile::parse(&f.to_json()).unwrap();
            assert_eq!(back, f);
            assert_eq!(back.to_structure().unwrap(), s);
        }
    }

    #[test]
    fn join_meet_form_and_disagreement() {
        let s = examples::chain3_godel();
        let mut f = StructureFile::from_structure("g", &s);
        let t = |o: &OpTable| -> Table {
            s.elems()
                .map(|x| {
                    (
                        s.name(x).to_string(),
                        s.elems().map(|y| s.name(o.get(x, y)).to_string()).collect(),
                    )
                })
                .collect()
        };
        f.join = Some(t(s.join_table()));
        f.meet = Some(t(s.meet_table()));
        assert_eq!(f.to_structure().unwrap(), s);
        f.order = None;
        f.residuum = None;
        assert_eq!(f.to_structure().unwrap(), s);
        // order claims 0 < 1 < m while the tables say 0 < m < 1
        f.order = Some(Order::Pairs(vec![
            ["0".into(), "1".into()],
            ["1".into(), "m".into()],
        ]));
        f.elements = s.names().to_vec();
        let err = f.to_structure();
        assert!(matches!(err, Err(FormatError::Malformed(_))), "{err:?}");
    }

    #[test]
    fn unknown_names_are_named() {
        let mut f = StructureFile::from_structure("c", &examples::chain2());
        f.times.as_mut().unwrap()["1"][0] = "z".into();
        let msg = f.to_structure().unwrap_err().to_string();
        assert!(msg.contains("`z`"), "{msg}");
    }
}
