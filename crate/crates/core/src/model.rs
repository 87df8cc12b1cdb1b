//! Object, motion and functional-unit values.
//!
//! Every label is stored trimmed and lowercased. States are a sorted set,
//! ingredients a sorted multiset, so two objects describe the same kitchen
//! item exactly when their [`ObjectKey`]s are equal.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

fn canon(label: &str) -> String {
    label.trim().to_lowercase()
}

/// An object together with its states and ingredients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectNode {
    name: String,
    states: Vec<String>,
    ingredients: Vec<String>,
}

impl ObjectNode {
    /// Builds a canonical object node.
    ///
    /// Panics if the name is empty after trimming; parsers reject such input
    /// before getting here.
    pub fn new<N, S, I>(name: N, states: S, ingredients: I) -> Self
    where
        N: AsRef<str>,
        S: IntoIterator,
        S::Item: AsRef<str>,
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let name = canon(name.as_ref());
        assert!(!name.is_empty(), "object name must not be empty");
        let states: BTreeSet<String> = states.into_iter().map(|s| canon(s.as_ref())).collect();
        let mut ingredients: Vec<String> = ingredients.into_iter().map(|s| canon(s.as_ref())).collect();
        ingredients.sort();
        Self {
            name,
            states: states.into_iter().collect(),
            ingredients,
        }
    }

    /// Shorthand for an object without ingredients.
    pub fn with_states<N, S>(name: N, states: S) -> Self
    where
        N: AsRef<str>,
        S: IntoIterator,
        S::Item: AsRef<str>,
    {
        Self::new(name, states, std::iter::empty::<&str>())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn ingredients(&self) -> &[String] {
        &self.ingredients
    }

    pub fn key(&self) -> ObjectKey {
        object_key(self)
    }
}

/// Canonical identity of an object node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectKey {
    pub name: String,
    pub states: Vec<String>,
    pub ingredients: Vec<String>,
}

impl ObjectKey {
    /// Canonicalizes raw labels the same way [`ObjectNode::new`] does.
    pub fn new<N, S, I>(name: N, states: S, ingredients: I) -> Self
    where
        N: AsRef<str>,
        S: IntoIterator,
        S::Item: AsRef<str>,
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        ObjectNode::new(name, states, ingredients).key()
    }

    /// Converts back into a node (used when a goal must be rendered as an object).
    pub fn to_node(&self) -> ObjectNode {
        ObjectNode {
            name: self.name.clone(),
            states: self.states.clone(),
            ingredients: self.ingredients.clone(),
        }
    }
}

impl fmt::Display for ObjectKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.states.is_empty() {
            write!(f, " {{{}}}", self.states.join(", "))?;
        }
        if !self.ingredients.is_empty() {
            write!(f, " [{}]", self.ingredients.join(", "))?;
        }
        Ok(())
    }
}

/// Pure, order-insensitive key derivation.
pub fn object_key(node: &ObjectNode) -> ObjectKey {
    ObjectKey {
        name: node.name.clone(),
        states: node.states.clone(),
        ingredients: node.ingredients.clone(),
    }
}

/// The single manipulation action of a functional unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MotionNode {
    name: String,
    start_time: Option<String>,
    end_time: Option<String>,
}

impl MotionNode {
    pub fn new<N: AsRef<str>>(name: N) -> Self {
        let name = canon(name.as_ref());
        assert!(!name.is_empty(), "motion name must not be empty");
        Self {
            name,
            start_time: None,
            end_time: None,
        }
    }

    /// Attaches timestamps. A lone `end` is stored as the start time.
    pub fn with_times(mut self, start: Option<String>, end: Option<String>) -> Self {
        let clean = |t: Option<String>| t.map(|t| t.trim().to_string()).filter(|t| !t.is_empty());
        let (start, end) = match (clean(start), clean(end)) {
            (None, Some(e)) => (Some(e), None),
            other => other,
        };
        self.start_time = start;
        self.end_time = end;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start_time(&self) -> Option<&str> {
        self.start_time.as_deref()
    }

    pub fn end_time(&self) -> Option<&str> {
        self.end_time.as_deref()
    }
}

/// Input objects, one motion, output objects.
///
/// Equality compares input and output key multisets and the motion name;
/// object order and motion timestamps do not participate.
#[derive(Debug, Clone)]
pub struct FunctionalUnit {
    inputs: Vec<ObjectNode>,
    motion: MotionNode,
    outputs: Vec<ObjectNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct UnitSignature<'a> {
    inputs: Vec<&'a ObjectNode>,
    motion: &'a str,
    outputs: Vec<&'a ObjectNode>,
}

impl FunctionalUnit {
    /// Panics when either side is empty; use the parser for untrusted input.
    pub fn new(inputs: Vec<ObjectNode>, motion: MotionNode, outputs: Vec<ObjectNode>) -> Self {
        assert!(!inputs.is_empty(), "a functional unit needs at least one input");
        assert!(!outputs.is_empty(), "a functional unit needs at least one output");
        Self {
            inputs,
            motion,
            outputs,
        }
    }

    pub fn inputs(&self) -> &[ObjectNode] {
        &self.inputs
    }

    pub fn motion(&self) -> &MotionNode {
        &self.motion
    }

    pub fn outputs(&self) -> &[ObjectNode] {
        &self.outputs
    }

    pub fn input_keys(&self) -> impl Iterator<Item = ObjectKey> + '_ {
        self.inputs.iter().map(object_key)
    }

    pub fn output_keys(&self) -> impl Iterator<Item = ObjectKey> + '_ {
        self.outputs.iter().map(object_key)
    }

    pub fn produces(&self, key: &ObjectKey) -> bool {
        self.outputs
            .iter()
            .any(|o| o.name == key.name && o.states == key.states && o.ingredients == key.ingredients)
    }

    pub(crate) fn signature(&self) -> UnitSignature<'_> {
        // ObjectNode and ObjectKey share field layout and ordering, so sorting
        // nodes sorts keys.
        let mut inputs: Vec<&ObjectNode> = self.inputs.iter().collect();
        let mut outputs: Vec<&ObjectNode> = self.outputs.iter().collect();
        inputs.sort();
        outputs.sort();
        UnitSignature {
            inputs,
            motion: &self.motion.name,
            outputs,
        }
    }
}

impl PartialEq for FunctionalUnit {
    fn eq(&self, other: &Self) -> bool {
        self.signature() == other.signature()
    }
}

impl Eq for FunctionalUnit {}

impl Hash for FunctionalUnit {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.signature().hash(state);
    }
}

/// True iff the two units carry the same knowledge; timestamps are ignored.
pub fn unit_equals(a: &FunctionalUnit, b: &FunctionalUnit) -> bool {
    a == b
}

/// Items available before execution starts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Kitchen {
    items: BTreeSet<ObjectKey>,
}

impl Kitchen {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the item was already present.
    pub fn insert(&mut self, key: ObjectKey) -> bool {
        self.items.insert(key)
    }

    pub fn contains(&self, key: &ObjectKey) -> bool {
        self.items.contains(key)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ObjectKey> {
        self.items.iter()
    }
}

impl FromIterator<ObjectKey> for Kitchen {
    fn from_iter<T: IntoIterator<Item = ObjectKey>>(iter: T) -> Self {
        Self {
            items: iter.into_iter().collect(),
        }
    }
}

/// The object a retrieval has to produce.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoalSpec {
    pub target: ObjectKey,
}

impl GoalSpec {
    pub fn new(target: ObjectKey) -> Self {
        Self { target }
    }
}
