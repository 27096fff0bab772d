// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! One-dimensional colour refinement with a caller-supplied initial colouring.

use super::Graph;

/// Refines `colors` until stable and returns the canonical stable colouring.
///
/// Each round keys a vertex by its current colour and the sorted multiset of
/// its neighbours' colours; the distinct keys are sorted and renumbered
/// `0..k`. The numbering only depends on the graph structure and the input
/// colours, so colourings of different graphs (or of the two halves of a
/// disjoint union) are comparable.
pub(crate) fn refine(g: &Graph, colors: &[u32]) -> Vec<u32> {
    let n = g.n();
    assert_eq!(colors.len(), n);
    let mut current = renumber(colors.iter().map(|&c| (c, Vec::new())).collect());
    let mut classes = count_classes(&current);
    loop {
        let keys: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v).map(|u| current[u]).collect();
                nb.sort_unstable();
                (current[v], nb)
            })
            .collect();
        let next = renumber(keys);
        let next_classes = count_classes(&next);
        current = next;
        if next_classes == classes {
            return current;
        }
        classes = next_classes;
    }
}

fn renumber(keys: Vec<(u32, Vec<u32>)>) -> Vec<u32> {
    let mut distinct: Vec<&(u32, Vec<u32>)> = keys.iter().collect();
    distinct.sort_unstable();
    distinct.dedup();
    keys.iter()
        .map(|k| distinct.binary_search(&k).expect("key present") as u32)
        .collect()
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}
