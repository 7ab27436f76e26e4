use num_complex::Complex64;

use super::ConvergenceScan;

/// One energy level followed across the sizes of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub level: usize,
    /// Matched eigenvalue at each size; `None` before an entrant appears.
    pub values: Vec<Option<Complex64>>,
    /// Position of the matched eigenvalue in each sorted spectrum.
    pub indices: Vec<Option<usize>>,
    /// True when the level first appeared after the smallest size.
    pub entrant: bool,
}

impl Trajectory {
    pub fn last_value(&self) -> Option<Complex64> {
        self.values.last().copied().flatten()
    }

    pub fn last_index(&self) -> Option<usize> {
        self.indices.last().copied().flatten()
    }
}

pub fn match_levels(scan: &ConvergenceScan) -> Vec<Trajectory> {
    let spectra: Vec<Vec<Complex64>> = scan.spectra.iter().map(|s| s.eigenvalues.clone()).collect();
    match_spectra(&spectra)
}

/// Greedy nearest-neighbour matching between consecutive spectra.
///
/// Trajectories are seeded from the first spectrum in (Re, Im) order. At each
/// step all (trajectory, eigenvalue) pairs are ranked by distance and
/// accepted closest first; ties break on trajectory then eigenvalue index.
/// Eigenvalues left over start new entrant trajectories.
pub fn match_spectra(spectra: &[Vec<Complex64>]) -> Vec<Trajectory> {
    let Some(first) = spectra.first() else {
        return Vec::new();
    };
    let steps = spectra.len();
    let mut first_sorted: Vec<(usize, Complex64)> = first.iter().copied().enumerate().collect();
    first_sorted.sort_by(|a, b| a.1.re.total_cmp(&b.1.re).then(a.1.im.total_cmp(&b.1.im)));

    let mut trajectories: Vec<Trajectory> = first_sorted
        .into_iter()
        .enumerate()
        .map(|(level, (idx, z))| {
            let mut values = vec![None; steps];
            let mut indices = vec![None; steps];
            values[0] = Some(z);
            indices[0] = Some(idx);
            Trajectory {
                level,
                values,
                indices,
                entrant: false,
            }
        })
        .collect();

    for step in 1..steps {
        let next = &spectra[step];
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (t, traj) in trajectories.iter().enumerate() {
            let Some(prev) = traj.values[step - 1] else { continue };
            for (e, z) in next.iter().enumerate() {
                pairs.push(((z - prev).norm(), t, e));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

        let mut traj_done = vec![false; trajectories.len()];
        let mut used = vec![false; next.len()];
        for (_, t, e) in pairs {
            if traj_done[t] || used[e] {
                continue;
            }
            traj_done[t] = true;
            used[e] = true;
            trajectories[t].values[step] = Some(next[e]);
            trajectories[t].indices[step] = Some(e);
        }

        let mut fresh: Vec<usize> = (0..next.len()).filter(|&e| !used[e]).collect();
        fresh.sort_by(|&a, &b| next[a].re.total_cmp(&next[b].re).then(next[a].im.total_cmp(&next[b].im)));
        for e in fresh {
            let mut values = vec![None; steps];
            let mut indices = vec![None; steps];
            values[step] = Some(next[e]);
            indices[step] = Some(e);
            trajectories.push(Trajectory {
                level: trajectories.len(),
                values,
                indices,
                entrant: true,
            });
        }
    }
    trajectories
}
