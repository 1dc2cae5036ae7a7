//! 140-level ready queue with an occupancy bitmap.
//!
//! Bit `p` of the bitmap is set exactly when level `p` holds at least one
//! task. Selecting the most urgent task is a find-first-set over three
//! 64-bit words, independent of how many tasks are queued.

use std::collections::{HashMap, VecDeque};

use super::{SchedError, TaskId, TaskPriority};

const WORDS: usize = TaskPriority::LEVELS.div_ceil(64);

#[derive(Debug, Clone)]
pub struct RunQueue {
    levels: Vec<VecDeque<TaskId>>,
    bitmap: [u64; WORDS],
    // task id -> level it currently sits in
    members: HashMap<TaskId, TaskPriority>,
}

impl Default for RunQueue {
    fn default() -> Self {
        Self::new()
    }
}

impl PartialEq for RunQueue {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

impl Eq for RunQueue {}

impl RunQueue {
    pub fn new() -> Self {
        RunQueue {
            levels: vec![VecDeque::new(); TaskPriority::LEVELS],
            bitmap: [0; WORDS],
            members: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: TaskId) -> bool {
        self.members.contains_key(&id)
    }

    /// Append at the tail of `prio`'s level.
    pub fn push_back(&mut self, prio: TaskPriority, id: TaskId) -> Result<(), SchedError> {
        self.admit(prio, id)?;
        self.levels[prio.index()].push_back(id);
        self.set_bit(prio.index());
        Ok(())
    }

    /// Insert at the head of `prio`'s level, ahead of its peers.
    pub fn push_front(&mut self, prio: TaskPriority, id: TaskId) -> Result<(), SchedError> {
        self.admit(prio, id)?;
        self.levels[prio.index()].push_front(id);
        self.set_bit(prio.index());
        Ok(())
    }

    fn admit(&mut self, prio: TaskPriority, id: TaskId) -> Result<(), SchedError> {
        if self.members.contains_key(&id) {
            return Err(SchedError::AlreadyQueued(id));
        }
        self.members.insert(id, prio);
        Ok(())
    }

    /// Lowest-numbered nonempty level, if any.
    pub fn highest_level(&self) -> Option<TaskPriority> {
        self.bitmap.iter().enumerate().find_map(|(w, &bits)| {
            (bits != 0).then(|| TaskPriority::from_index(w * 64 + bits.trailing_zeros() as usize))
        })
    }

    /// Head of the most urgent nonempty level, without removing it.
    pub fn pick_next(&self) -> Option<TaskId> {
        self.peek().map(|(_, id)| id)
    }

    pub fn peek(&self) -> Option<(TaskPriority, TaskId)> {
        let prio = self.highest_level()?;
        let id = *self.levels[prio.index()]
            .front()
            .expect("bitmap bit set for an empty level");
        Some((prio, id))
    }

    /// Remove and return the head of the most urgent nonempty level.
    pub fn pop_next(&mut self) -> Option<(TaskPriority, TaskId)> {
        let prio = self.highest_level()?;
        let level = &mut self.levels[prio.index()];
        let id = level.pop_front().expect("bitmap bit set for an empty level");
        if level.is_empty() {
            self.clear_bit(prio.index());
        }
        self.members.remove(&id);
        Some((prio, id))
    }

    /// Task ids queued at one level, head first.
    pub fn level(&self, prio: TaskPriority) -> impl Iterator<Item = TaskId> + '_ {
        self.levels[prio.index()].iter().copied()
    }

    pub fn is_level_occupied(&self, prio: TaskPriority) -> bool {
        let i = prio.index();
        self.bitmap[i / 64] & (1 << (i % 64)) != 0
    }

    /// True when every bitmap bit agrees with its level's occupancy.
    pub fn bitmap_coherent(&self) -> bool {
        (0..TaskPriority::LEVELS).all(|i| {
            let prio = TaskPriority::from_index(i);
            self.is_level_occupied(prio) == !self.levels[i].is_empty()
        }) && self.bitmap[WORDS - 1] >> (TaskPriority::LEVELS % 64) == 0
    }

    fn set_bit(&mut self, i: usize) {
        self.bitmap[i / 64] |= 1 << (i % 64);
    }

    fn clear_bit(&mut self, i: usize) {
        self.bitmap[i / 64] &= !(1 << (i % 64));
    }
}
