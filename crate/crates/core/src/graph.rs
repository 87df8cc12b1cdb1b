//! The indexed universal FOON.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::model::{FunctionalUnit, ObjectKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("units {first} and {second} are equal")]
    DuplicateUnit { first: usize, second: usize },
}

/// Dense id of an interned object key.
pub(crate) type KeyId = usize;

/// Deduplicated, ordered functional units plus an index from each output key
/// to the units producing it.
///
/// Unit indices are positions in [`FoonGraph::units`] and serve as stable
/// unit identifiers everywhere else.
#[derive(Debug, Clone, Default)]
pub struct FoonGraph {
    units: Vec<FunctionalUnit>,
    output_index: BTreeMap<ObjectKey, Vec<usize>>,
    keys: Vec<ObjectKey>,
    key_ids: HashMap<ObjectKey, KeyId>,
    unit_inputs: Vec<Vec<KeyId>>,
    producers: Vec<Vec<usize>>,
}

/// Indexes an already-deduplicated unit list.
pub fn index_outputs(units: Vec<FunctionalUnit>) -> Result<FoonGraph, GraphError> {
    FoonGraph::new(units)
}

/// Units whose outputs contain `needed`, in ascending index order.
pub fn find_candidate_units<'g>(graph: &'g FoonGraph, needed: &ObjectKey) -> &'g [usize] {
    graph.candidates(needed)
}

impl FoonGraph {
    pub fn new(units: Vec<FunctionalUnit>) -> Result<Self, GraphError> {
        let mut seen: HashMap<&FunctionalUnit, usize> = HashMap::with_capacity(units.len());
        for (i, unit) in units.iter().enumerate() {
            if let Some(&first) = seen.get(unit) {
                return Err(GraphError::DuplicateUnit { first, second: i });
            }
            seen.insert(unit, i);
        }
        drop(seen);

        let mut graph = FoonGraph::default();
        for (i, unit) in units.iter().enumerate() {
            let inputs: Vec<KeyId> = unit.input_keys().map(|k| graph.intern(k)).collect();
            let mut outputs: Vec<KeyId> = unit.output_keys().map(|k| graph.intern(k)).collect();
            outputs.sort_unstable();
            outputs.dedup();
            for &out in &outputs {
                graph.producers[out].push(i);
                graph.output_index.entry(graph.keys[out].clone()).or_default().push(i);
            }
            graph.unit_inputs.push(inputs);
        }
        graph.units = units;
        Ok(graph)
    }

    fn intern(&mut self, key: ObjectKey) -> KeyId {
        if let Some(&id) = self.key_ids.get(&key) {
            return id;
        }
        let id = self.keys.len();
        self.keys.push(key.clone());
        self.key_ids.insert(key, id);
        self.producers.push(Vec::new());
        id
    }

    pub fn units(&self) -> &[FunctionalUnit] {
        &self.units
    }

    pub fn unit(&self, index: usize) -> &FunctionalUnit {
        &self.units[index]
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn output_index(&self) -> &BTreeMap<ObjectKey, Vec<usize>> {
        &self.output_index
    }

    pub fn candidates(&self, needed: &ObjectKey) -> &[usize] {
        self.output_index.get(needed).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn key_id(&self, key: &ObjectKey) -> Option<KeyId> {
        self.key_ids.get(key).copied()
    }

    pub(crate) fn key(&self, id: KeyId) -> &ObjectKey {
        &self.keys[id]
    }

    pub(crate) fn key_count(&self) -> usize {
        self.keys.len()
    }

    pub(crate) fn input_ids(&self, unit: usize) -> &[KeyId] {
        &self.unit_inputs[unit]
    }

    pub(crate) fn producers_of(&self, key: KeyId) -> &[usize] {
        &self.producers[key]
    }
}
