//! Mutable search state with an undo trail.

use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::instance::{Instance, Load, Solution, Time};

/// Transitively closed precedence relation between workers: an arc `(v, w)`
/// means `v` must sit at an earlier station than `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorkerOrderGraph {
    succ: Vec<FixedBitSet>,
    pred: Vec<FixedBitSet>,
}

impl WorkerOrderGraph {
    pub fn new(n_workers: usize) -> Self {
        Self {
            succ: vec![FixedBitSet::with_capacity(n_workers); n_workers],
            pred: vec![FixedBitSet::with_capacity(n_workers); n_workers],
        }
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.succ[from].contains(to)
    }

    pub fn successors(&self, worker: usize) -> &FixedBitSet {
        &self.succ[worker]
    }

    pub fn predecessors(&self, worker: usize) -> &FixedBitSet {
        &self.pred[worker]
    }

    pub fn is_acyclic(&self) -> bool {
        (0..self.succ.len()).all(|v| !self.succ[v].contains(v))
            && (0..self.succ.len()).all(|v| self.succ[v].is_disjoint(&self.pred[v]))
    }

    /// Workers sorted by number of predecessors, then index: a topological
    /// order of a transitively closed graph.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.succ.len()).collect();
        order.sort_by_key(|&w| (self.pred[w].count_ones(..), w));
        order
    }

    fn insert(&mut self, from: usize, to: usize) -> bool {
        if self.succ[from].put(to) {
            return false;
        }
        self.pred[to].insert(from);
        true
    }

    fn remove(&mut self, from: usize, to: usize) {
        self.succ[from].set(to, false);
        self.pred[to].set(from, false);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TrailEntry {
    Assign { task: usize, worker: usize },
    Exclude { task: usize, worker: usize },
    Arc { from: usize, to: usize },
}

#[derive(Debug, Clone)]
pub struct SearchState<'a> {
    inst: &'a Instance,
    worker_of: Vec<Option<usize>>,
    loads: Vec<Load>,
    /// Per worker: tasks excluded by reduction rules or infeasible times.
    excluded: Vec<FixedBitSet>,
    on_worker: Vec<FixedBitSet>,
    order: WorkerOrderGraph,
    n_assigned: usize,
    trail: Vec<TrailEntry>,
}

impl<'a> SearchState<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let (n, m) = (inst.n_tasks(), inst.n_workers());
        let excluded = (0..m)
            .map(|w| {
                let mut set = FixedBitSet::with_capacity(n);
                set.extend((0..n).filter(|&t| inst.time(t, w).is_none()));
                set
            })
            .collect();
        Self {
            inst,
            worker_of: vec![None; n],
            loads: vec![0; m],
            excluded,
            on_worker: vec![FixedBitSet::with_capacity(n); m],
            order: WorkerOrderGraph::new(m),
            n_assigned: 0,
            trail: Vec::new(),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn worker_of(&self, task: usize) -> Option<usize> {
        self.worker_of[task]
    }

    pub fn load(&self, worker: usize) -> Load {
        self.loads[worker]
    }

    pub fn loads(&self) -> &[Load] {
        &self.loads
    }

    pub fn tasks_on(&self, worker: usize) -> &FixedBitSet {
        &self.on_worker[worker]
    }

    pub fn excluded(&self, worker: usize) -> &FixedBitSet {
        &self.excluded[worker]
    }

    pub fn order_graph(&self) -> &WorkerOrderGraph {
        &self.order
    }

    pub fn is_complete(&self) -> bool {
        self.n_assigned == self.worker_of.len()
    }

    pub fn unassigned(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.worker_of.len()).filter(|&t| self.worker_of[t].is_none())
    }

    /// Time of `task` on `worker` under the current reductions; an assigned
    /// task is only available on its own worker.
    pub fn effective_time(&self, task: usize, worker: usize) -> Option<Time> {
        match self.worker_of[task] {
            Some(w) if w != worker => None,
            _ if self.excluded[worker].contains(task) => None,
            _ => self.inst.time(task, worker),
        }
    }

    /// Minimum effective time over all workers, `None` if no worker is left.
    pub fn effective_min(&self, task: usize) -> Option<Time> {
        (0..self.loads.len()).filter_map(|w| self.effective_time(task, w)).min()
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Workers of assigned tasks in `tasks`, other than `skip`.
    fn workers_among(&self, tasks: &FixedBitSet, skip: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.loads.len());
        for t in tasks.ones() {
            if let Some(v) = self.worker_of[t] {
                if v != skip {
                    out.insert(v);
                }
            }
        }
        out
    }

    /// Would assigning `task` to `worker` keep the worker order acyclic?
    pub fn assignment_is_valid(&self, task: usize, worker: usize) -> bool {
        let mut before = self.workers_among(self.inst.preds_star(task), worker);
        before.union_with(self.order.predecessors(worker));
        let mut after = self.workers_among(self.inst.succs_star(task), worker);
        after.union_with(self.order.successors(worker));
        if !before.is_disjoint(&after) {
            return false;
        }
        after.ones().all(|v| self.order.successors(v).is_disjoint(&before))
    }

    /// Cheap test used when ranking tasks: would a direct precedence arc of
    /// `task` insert the inverse of an existing worker arc?
    pub fn creates_immediate_cycle(&self, task: usize, worker: usize) -> bool {
        let inst = self.inst;
        inst.preds(task)
            .iter()
            .filter_map(|&p| self.worker_of[p])
            .any(|v| v != worker && self.order.contains(worker, v))
            || inst
                .succs(task)
                .iter()
                .filter_map(|&s| self.worker_of[s])
                .any(|v| v != worker && self.order.contains(v, worker))
    }

    /// Records the assignment and closes the worker order under the induced
    /// arcs. The pair must be valid.
    pub fn set_assignment(&mut self, task: usize, worker: usize) {
        debug_assert!(self.assignment_is_valid(task, worker));
        let p = self
            .effective_time(task, worker)
            .expect("assignment to an excluded or infeasible cell");
        let inst = self.inst;
        let new_before = self.workers_among(inst.preds_star(task), worker);
        let new_after = self.workers_among(inst.succs_star(task), worker);

        self.worker_of[task] = Some(worker);
        self.loads[worker] += p as Load;
        self.on_worker[worker].insert(task);
        self.n_assigned += 1;
        self.trail.push(TrailEntry::Assign { task, worker });

        let mut ancestors = self.order.predecessors(worker).clone();
        for v in new_before.ones() {
            ancestors.insert(v);
            ancestors.union_with(self.order.predecessors(v));
        }
        ancestors.insert(worker);
        let mut descendants = self.order.successors(worker).clone();
        for v in new_after.ones() {
            descendants.insert(v);
            descendants.union_with(self.order.successors(v));
        }
        descendants.insert(worker);
        for x in ancestors.ones() {
            for y in descendants.ones() {
                if x != y && self.order.insert(x, y) {
                    self.trail.push(TrailEntry::Arc { from: x, to: y });
                }
            }
        }
        debug_assert!(self.order.is_acyclic());
    }

    /// Marks `task` as unavailable to `worker`; returns false if it already was.
    pub fn exclude(&mut self, task: usize, worker: usize) -> bool {
        if self.excluded[worker].put(task) {
            return false;
        }
        self.trail.push(TrailEntry::Exclude { task, worker });
        true
    }

    /// Undoes every change recorded after `mark`.
    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                TrailEntry::Assign { task, worker } => {
                    self.worker_of[task] = None;
                    self.loads[worker] -= self.inst.time(task, worker).unwrap() as Load;
                    self.on_worker[worker].set(task, false);
                    self.n_assigned -= 1;
                }
                TrailEntry::Exclude { task, worker } => self.excluded[worker].set(task, false),
                TrailEntry::Arc { from, to } => self.order.remove(from, to),
            }
        }
    }

    /// `unset_assignment` for the most recent `set_assignment` of `task`.
    pub fn unset_assignment(&mut self, task: usize, worker: usize) {
        let pos = self
            .trail
            .iter()
            .rposition(|e| *e == TrailEntry::Assign { task, worker })
            .expect("task was not assigned to this worker");
        self.undo_to(pos);
    }

    /// The complete assignment with stations in a topological order of the
    /// worker graph.
    pub fn to_solution(&self) -> Solution {
        assert!(self.is_complete());
        let assignment = self.worker_of.iter().map(|w| w.unwrap()).collect();
        Solution::new(self.inst, self.order.topological_order(), assignment).expect("assigned cells are feasible")
    }

    /// Hash of everything the trail restores.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.worker_of.hash(&mut h);
        self.loads.hash(&mut h);
        self.excluded.hash(&mut h);
        self.on_worker.hash(&mut h);
        self.order.hash(&mut h);
        self.n_assigned.hash(&mut h);
        h.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::check_solution;
    use crate::instance::fixtures::fig1;

    #[test]
    fn empty_state_accepts_anything_feasible() {
        let inst = fig1();
        let state = SearchState::new(&inst);
        assert!(state.assignment_is_valid(0, 2));
    }

    #[test]
    fn direct_arc_orders_workers() {
        let inst = fig1();
        let mut state = SearchState::new(&inst);
        state.set_assignment(0, 2);
        state.set_assignment(1, 0);
        assert!(state.order_graph().contains(2, 0));
        assert!(!state.order_graph().contains(0, 2));
    }

    #[test]
    fn closure_arc_orders_workers() {
        let inst = fig1();
        let mut state = SearchState::new(&inst);
        state.set_assignment(0, 2);
        state.set_assignment(5, 1);
        assert!(state.order_graph().contains(2, 1));
    }

    #[test]
    fn inverse_arc_is_rejected() {
        let inst = fig1();
        let mut state = SearchState::new(&inst);
        state.set_assignment(0, 0); // t1 on w1
        state.set_assignment(1, 1); // t2 on w2: w1 before w2
        assert!(state.order_graph().contains(0, 1));
        // t5 follows t2, so it cannot go back to w1
        assert!(!state.assignment_is_valid(4, 0));
        assert!(state.creates_immediate_cycle(4, 0));
        assert!(state.assignment_is_valid(4, 1));
        assert!(state.assignment_is_valid(4, 2));
        state.set_assignment(4, 2);
        assert!(state.order_graph().contains(1, 2));
        assert!(state.order_graph().contains(0, 2));
        // t3 sits between t1 (w1) and t5 (w3): every worker keeps the order
        for w in 0..3 {
            assert!(state.assignment_is_valid(2, w));
        }
    }

    #[test]
    fn transitive_cycle_is_rejected() {
        // arcs t1 -> t2 and t3 -> t4
        let inst = Instance::new(4, 3, vec![Some(1); 12], &[(0, 1), (2, 3)]).unwrap();
        let mut state = SearchState::new(&inst);
        state.set_assignment(0, 0);
        state.set_assignment(1, 1); // w1 < w2
        state.set_assignment(3, 0); // t4 on w1
                                    // t3 precedes t4: t3 on w2 would need w2 < w1
        assert!(!state.assignment_is_valid(2, 1));
        assert!(state.assignment_is_valid(2, 0));
        assert!(state.assignment_is_valid(2, 2));
        state.set_assignment(2, 2); // w3 < w1 < w2
        assert!(state.order_graph().contains(2, 1));
        assert_eq!(state.order_graph().topological_order(), vec![2, 0, 1]);
    }

    #[test]
    fn undo_restores_fingerprint() {
        let inst = fig1();
        let mut state = SearchState::new(&inst);
        let root = state.fingerprint();
        state.set_assignment(0, 2);
        let one = state.fingerprint();
        state.set_assignment(1, 0);
        state.exclude(3, 1);
        state.unset_assignment(1, 0);
        assert_eq!(state.fingerprint(), one);
        state.unset_assignment(0, 2);
        assert_eq!(state.fingerprint(), root);
        assert_eq!(state.trail_len(), 0);
    }

    #[test]
    fn complete_state_gives_valid_solution() {
        let inst = fig1();
        let mut state = SearchState::new(&inst);
        for (t, w) in [(0, 2), (2, 2), (1, 0), (3, 0), (4, 1), (5, 1)] {
            assert!(state.assignment_is_valid(t, w));
            state.set_assignment(t, w);
        }
        let sol = state.to_solution();
        check_solution(&inst, &sol).unwrap();
        assert_eq!(sol.worker_order, vec![2, 0, 1]);
        assert_eq!(sol.cycle_time, 6);
    }
}
