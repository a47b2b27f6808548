use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::class::{Layout, LocalizedClass, NovikovMap, NovikovSum};
use super::givental::shift_s;
use super::model::FixedPointModel;
use crate::algebra::{squarefree, RationalFunction, Substitution, VariableSpace};
use crate::coulomb::DiffOp;
use crate::error::{check_len, Error, Result};
use crate::gauge::Coweight;
use crate::parse::{parse_int_vector, parse_novikov};

/// Externally supplied values `S_mu(1)`, optionally with the full columns
/// `S_mu(e_k)` on the fixed-point basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTable {
    space: Arc<VariableSpace>,
    rank: usize,
    curve_rank: usize,
    entries: BTreeMap<Coweight, LocalizedClass>,
    operators: BTreeMap<Coweight, Vec<LocalizedClass>>,
    novikov_map: Option<NovikovMap>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryFile {
    Global(String),
    FixedPoints(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub rank: usize,
    #[serde(default)]
    pub aux: Vec<String>,
    pub curve_rank: usize,
    pub entries: BTreeMap<String, EntryFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub novikov_map: Option<NovikovMap>,
}

fn parse_entry(e: &EntryFile, space: &Arc<VariableSpace>, m: usize) -> Result<LocalizedClass> {
    Ok(match e {
        EntryFile::Global(t) => LocalizedClass::global(parse_novikov(t, space, m)?),
        EntryFile::FixedPoints(ts) => LocalizedClass::fixed_points(
            ts.iter().map(|t| parse_novikov(t, space, m)).collect::<Result<_>>()?,
        )?,
    })
}

fn entry_file(c: &LocalizedClass) -> EntryFile {
    match c.layout() {
        Layout::Global => EntryFile::Global(c.components()[0].to_string()),
        Layout::FixedPoints => EntryFile::FixedPoints(c.components().iter().map(|v| v.to_string()).collect()),
    }
}

fn key(lambda: &[i64]) -> String {
    format!(
        "[{}]",
        lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    )
}

impl OperatorTable {
    pub fn new(space: &Arc<VariableSpace>, rank: usize, curve_rank: usize) -> Result<Self> {
        check_len(space.n_equiv(), rank)?;
        Ok(Self {
            space: space.clone(),
            rank,
            curve_rank,
            entries: BTreeMap::new(),
            operators: BTreeMap::new(),
            novikov_map: None,
        })
    }

    fn check_class(&self, c: &LocalizedClass) -> Result<LocalizedClass> {
        let c = c.map(|v| v.reembed(&self.space))?;
        if let Some(m) = c.curve_rank() {
            check_len(self.curve_rank, m)?;
        }
        Ok(c)
    }

    pub fn insert(&mut self, lambda: Coweight, value: LocalizedClass) -> Result<()> {
        check_len(self.rank, lambda.len())?;
        let value = self.check_class(&value)?;
        self.entries.insert(lambda, value);
        Ok(())
    }

    pub fn insert_columns(&mut self, lambda: Coweight, columns: Vec<LocalizedClass>) -> Result<()> {
        check_len(self.rank, lambda.len())?;
        let columns = columns.iter().map(|c| self.check_class(c)).collect::<Result<_>>()?;
        self.operators.insert(lambda, columns);
        Ok(())
    }

    pub fn set_novikov_map(&mut self, map: NovikovMap) -> Result<()> {
        check_len(self.curve_rank, map.source_rank())?;
        self.novikov_map = Some(map);
        Ok(())
    }

    pub fn from_file(file: TableFile) -> Result<Self> {
        let aux: Vec<&str> = file.aux.iter().map(String::as_str).collect();
        let space = VariableSpace::standard(file.rank, 0, &aux)?;
        let mut table = Self::new(&space, file.rank, file.curve_rank)?;
        for (k, e) in &file.entries {
            table.insert(parse_int_vector(k)?, parse_entry(e, &space, file.curve_rank)?)?;
        }
        for (k, cols) in &file.operators {
            let columns = cols
                .iter()
                .map(|col| {
                    LocalizedClass::fixed_points(
                        col.iter()
                            .map(|t| parse_novikov(t, &space, file.curve_rank))
                            .collect::<Result<_>>()?,
                    )
                })
                .collect::<Result<_>>()?;
            table.insert_columns(parse_int_vector(k)?, columns)?;
        }
        if let Some(map) = file.novikov_map {
            map.validate()?;
            table.set_novikov_map(map)?;
        }
        Ok(table)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("table: {e}")))?;
        Self::from_file(file)
    }

    pub fn to_file(&self) -> TableFile {
        TableFile {
            rank: self.rank,
            aux: self.space.aux_names().to_vec(),
            curve_rank: self.curve_rank,
            entries: self.entries.iter().map(|(l, c)| (key(l), entry_file(c))).collect(),
            operators: self
                .operators
                .iter()
                .map(|(l, cols)| {
                    (
                        key(l),
                        cols.iter()
                            .map(|c| c.components().iter().map(|v| v.to_string()).collect())
                            .collect(),
                    )
                })
                .collect(),
            novikov_map: self.novikov_map.clone(),
        }
    }

    /// Givental-space values `S_mu(1)` and columns `S_mu(e_k)` for every `mu`
    /// in `support`.
    pub fn from_givental(model: &FixedPointModel, support: &[Coweight]) -> Result<Self> {
        let mut table = Self::new(model.space(), model.rank(), model.curve_rank())?;
        for mu in support {
            table.insert(mu.clone(), shift_s(model, mu, &model.unit())?)?;
            let columns = (0..model.points())
                .map(|k| shift_s(model, mu, &model.point_class(k)))
                .collect::<Result<_>>()?;
            table.insert_columns(mu.clone(), columns)?;
        }
        Ok(table)
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn curve_rank(&self) -> usize {
        self.curve_rank
    }

    pub fn novikov_map(&self) -> Option<&NovikovMap> {
        self.novikov_map.as_ref()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Coweight, &LocalizedClass)> {
        self.entries.iter()
    }

    pub fn entry(&self, lambda: &[i64]) -> Result<&LocalizedClass> {
        self.entries
            .get(lambda)
            .ok_or_else(|| Error::MissingTableEntry(lambda.to_vec()))
    }

    pub fn columns(&self, lambda: &[i64]) -> Result<&[LocalizedClass]> {
        self.operators
            .get(lambda)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingData(format!("operator columns for {lambda:?}")))
    }

    /// Apply a coefficient substitution and an exponent map to every value,
    /// moving the entry at `lambda` to `coweight_map(lambda)`.
    pub fn transform(
        &self,
        coweight_map: impl Fn(&[i64]) -> Coweight,
        sub: &Substitution,
        map: &NovikovMap,
    ) -> Result<Self> {
        check_len(self.curve_rank, map.source_rank())?;
        check_len(self.curve_rank, map.target_rank())?;
        let mut out = Self::new(&self.space, self.rank, self.curve_rank)?;
        for (l, c) in &self.entries {
            out.insert(coweight_map(l), c.transform(sub, map)?)?;
        }
        for (l, cols) in &self.operators {
            let cols = cols.iter().map(|c| c.transform(sub, map)).collect::<Result<_>>()?;
            out.insert_columns(coweight_map(l), cols)?;
        }
        out.novikov_map = self.novikov_map.clone();
        Ok(out)
    }
}

/// `sum_lambda c_lambda table(lambda)` over the curve lattice of the table.
pub fn assemble_raw(gamma: &DiffOp, table: &OperatorTable) -> Result<Option<LocalizedClass>> {
    let gamma = gamma.reembed(table.space())?;
    let mut acc: Option<LocalizedClass> = None;
    for (lambda, c) in gamma.terms() {
        let term = table.entry(lambda)?.scale(c)?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc)
}

/// `sum_lambda c_lambda table(lambda)` with Novikov exponents pushed through `nm`.
pub fn assemble_shift(gamma: &DiffOp, table: &OperatorTable, nm: &NovikovMap) -> Result<LocalizedClass> {
    check_len(table.curve_rank(), nm.source_rank())?;
    match assemble_raw(gamma, table)? {
        Some(c) => c.push(nm),
        None => Ok(LocalizedClass::global(NovikovSum::zero(table.space(), nm.target_rank()))),
    }
}

/// Set every equivariant parameter to zero.
pub fn noneq_limit(x: &LocalizedClass) -> Result<LocalizedClass> {
    x.map(|v| {
        let space = v.space();
        let mut sub = Substitution::new(space);
        let zero = RationalFunction::zero(space);
        for i in 0..space.n_equiv() {
            sub.set(space.equiv(i), zero.clone())?;
        }
        for i in 0..space.n_flavour() {
            sub.set(space.flavour(i), zero.clone())?;
        }
        v.map_coefficients(|c| {
            let den = sub.apply_poly(c.denom())?;
            if den.is_zero() {
                return Err(Error::NoNonEquivariantLimit(squarefree(c.denom()).to_string()));
            }
            sub.apply(c)
        })
    })
}

/// Set `h = 0`.
pub fn classical_value(x: &LocalizedClass) -> Result<LocalizedClass> {
    x.map(|v| {
        let space = v.space();
        let mut sub = Substitution::new(space);
        sub.set(space.hbar(), RationalFunction::zero(space))?;
        v.map_coefficients(|c| sub.apply(c))
    })
}
