#![allow(dead_code)]

pub mod oracle;

pub const HOPF: [[u32; 4]; 2] = [[4, 1, 3, 2], [2, 3, 1, 4]];
pub const TREFOIL: [[u32; 4]; 3] = [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]];
pub const FIGURE_EIGHT: [[u32; 4]; 4] = [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];

/// Planar-diagram code of the closure of a braid word. Letter `+i` crosses
/// strands `i` and `i+1` (1-based) with the left strand passing under, `-i`
/// with it passing over.
pub fn braid_closure_pd(strands: usize, word: &[i32]) -> Vec<[u32; 4]> {
    let mut next = strands as u32 + 1;
    let mut at: Vec<u32> = (1..=strands as u32).collect();
    let mut pd = Vec::new();
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        let (bl, br) = (at[i], at[i + 1]);
        let (tl, tr) = (next, next + 1);
        next += 2;
        pd.push(if g > 0 { [bl, br, tr, tl] } else { [br, tr, tl, bl] });
        at[i] = tl;
        at[i + 1] = tr;
    }
    // close up: the label leaving the top of position j is the one entering at the bottom
    let top: std::collections::HashMap<u32, u32> = at.iter().enumerate().map(|(j, &l)| (l, j as u32 + 1)).collect();
    for x in &mut pd {
        for l in x.iter_mut() {
            if let Some(&b) = top.get(l) {
                *l = b;
            }
        }
    }
    pd
}
