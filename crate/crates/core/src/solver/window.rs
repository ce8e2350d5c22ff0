use std::collections::VecDeque;

/// The last `m_k + 1` accepted objective values, `m_k = min{k, m}`.
#[derive(Clone, Debug)]
pub struct WindowState {
    capacity: usize,
    recent_psi: VecDeque<f64>,
}

impl WindowState {
    /// A window for nonmonotonicity parameter `m`, seeded with `ψ(x⁰)`.
    pub fn new(m: usize, psi0: f64) -> Self {
        let mut recent_psi = VecDeque::with_capacity(m + 1);
        recent_psi.push_back(psi0);
        Self {
            capacity: m + 1,
            recent_psi,
        }
    }

    pub fn push(&mut self, psi: f64) {
        if self.recent_psi.len() == self.capacity {
            self.recent_psi.pop_front();
        }
        self.recent_psi.push_back(psi);
    }

    pub fn len(&self) -> usize {
        self.recent_psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recent_psi.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.recent_psi.iter().copied()
    }

    /// `ψ(x^{l(k)}) = max_{j=0..m_k} ψ(x^{k−j})`.
    pub fn acceptance_reference(&self) -> f64 {
        self.recent_psi
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Free-function form of [`WindowState::acceptance_reference`].
pub fn acceptance_reference(window: &WindowState) -> f64 {
    window.acceptance_reference()
}
