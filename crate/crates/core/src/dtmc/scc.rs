use super::Chain;

/// Strongly connected components (Tarjan, iterative). Each component is
/// sorted; components are ordered by their smallest state.
pub fn sccs<C: Chain + ?Sized>(chain: &C) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = chain.num_states();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    // (state, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = chain.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos].0;
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out.sort_by_key(|c| c[0]);
    out
}

/// Bottom SCCs: components no transition leaves.
pub fn bsccs<C: Chain + ?Sized>(chain: &C) -> Vec<Vec<usize>> {
    let comps = sccs(chain);
    let mut comp_of = vec![0; chain.num_states()];
    for (i, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = i;
        }
    }
    comps
        .into_iter()
        .enumerate()
        .filter(|(i, c)| {
            c.iter()
                .all(|&s| chain.successors(s).iter().all(|&(t, _)| comp_of[t] == *i))
        })
        .map(|(_, c)| c)
        .collect()
}
