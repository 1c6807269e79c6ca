use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

/// Concurrent memo table: many readers, and each key is computed at most
/// once. The map lock is only held while looking up the per-key cell, so a
/// computation may recursively consult other keys.
pub struct OnceMap<K, V> {
    cells: Mutex<HashMap<K, Arc<OnceLock<V>>>>,
}

impl<K: Eq + Hash + Clone, V: Clone> OnceMap<K, V> {
    pub fn new() -> Self {
        OnceMap { cells: Mutex::new(HashMap::new()) }
    }

    pub fn get_or_compute(&self, key: &K, compute: impl FnOnce() -> V) -> V {
        let cell = {
            let mut cells = self.cells.lock().expect("memo lock poisoned");
            cells.entry(key.clone()).or_default().clone()
        };
        cell.get_or_init(compute).clone()
    }

    pub fn len(&self) -> usize {
        self.cells.lock().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.cells.lock().expect("memo lock poisoned").clear();
    }
}

impl<K: Eq + Hash + Clone, V: Clone> Default for OnceMap<K, V> {
    fn default() -> Self {
        Self::new()
    }
}
