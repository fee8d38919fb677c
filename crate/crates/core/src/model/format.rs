//! Text forms of nodes and tables.
//!
//! A node lists its components between angle brackets, separated by `|`,
//! with entries separated by `,`: `<0,1|K1,nu1>`. The root is `<>`.
//! Entries of level 0 are numbers, entries of level `i >= 1` are basis names.
//!
//! A table file starts with `level <k>` and lists entries `<node> <n> -> <value>`
//! over nodes of `d_{k-1}`. An entry holds at the node and at every later
//! node. `#` starts a comment.
//!
//! ```text
//! level 1
//! <> 0 -> 0
//! <1> 1 -> 1
//! <0> 1 -> 0
//! ```

use super::{BsError, Elem, Model, NodeB, Table};

fn err(line: usize, msg: impl Into<String>) -> BsError {
    BsError::Format { line, msg: msg.into() }
}

pub fn print_node(model: &Model, node: &NodeB) -> String {
    if node.lh() == 0 {
        return "<>".into();
    }
    let comps: Vec<String> = node
        .comps
        .iter()
        .enumerate()
        .map(|(i, c)| c.iter().map(|&e| model.names[i][e as usize].clone()).collect::<Vec<_>>().join(","))
        .collect();
    format!("<{}>", comps.join("|"))
}

/// Parses a node with `components` components (a node of `d_{components-1}`).
pub fn parse_node(model: &Model, text: &str, components: usize) -> Result<NodeB, BsError> {
    let bad = |msg: String| BsError::Format { line: 0, msg };
    if components == 0 || components > model.trees.len() {
        return Err(bad(format!("nodes have 1 to {} components", model.trees.len())));
    }
    let inner = text
        .trim()
        .strip_prefix('<')
        .and_then(|t| t.strip_suffix('>'))
        .ok_or_else(|| bad(format!("'{text}' is not a node")))?;
    if inner.trim().is_empty() {
        return Ok(NodeB::root(components));
    }
    let parts: Vec<&str> = inner.split('|').collect();
    if parts.len() != components {
        return Err(bad(format!("'{text}' has {} components, expected {components}", parts.len())));
    }
    let mut comps = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let mut comp = Vec::new();
        for name in part.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let idx = model.names[i]
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| bad(format!("'{name}' is not an entry of level {i}")))?;
            comp.push(idx as u32);
        }
        comps.push(comp);
    }
    let node = NodeB { comps };
    if node.comps.iter().any(|c| c.len() != node.lh()) {
        return Err(bad(format!("'{text}' has components of unequal length")));
    }
    if node.lh() > model.depth() as usize {
        return Err(bad(format!("'{text}' is longer than the depth {}", model.depth())));
    }
    Ok(node)
}

/// Prints the entries of a table at the nodes where they first appear.
pub fn print_table(model: &Model, t: &Table) -> Result<String, BsError> {
    let tree = model.domain_of(t.level)?;
    let mut out = format!("level {}\n", t.level);
    for x in 0..tree.len() {
        for n in 0..model.depth() {
            let Some(v) = t.get(x, n) else { continue };
            let inherited = tree.parent[x].is_some_and(|p| t.get(p, n) == Some(v));
            if inherited {
                continue;
            }
            if let Elem::Fun(_) = v {
                if model.basis_index(t.level as usize - 1, v).is_none() {
                    return Err(BsError::Unsupported("table values outside the basis have no text form".into()));
                }
            }
            out.push_str(&format!("{} {n} -> {}\n", print_node(model, &tree.nodes[x]), model.describe(v)));
        }
    }
    Ok(out)
}

pub fn parse_table(model: &Model, text: &str) -> Result<Table, BsError> {
    let mut level = None;
    let mut entries: Vec<Option<Elem>> = Vec::new();
    let d = model.depth() as usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some(k) = level else {
            let k: u32 = body
                .strip_prefix("level")
                .and_then(|r| r.trim().parse().ok())
                .ok_or_else(|| err(line, "expected 'level <k>'"))?;
            let tree = model.domain_of(k).map_err(|e| err(line, e.to_string()))?;
            entries = vec![None; tree.len() * d];
            level = Some(k);
            continue;
        };
        let tree = &model.trees[k as usize - 1];
        let close = body.find('>').ok_or_else(|| err(line, "expected '<node>'"))?;
        let node = parse_node(model, &body[..=close], k as usize).map_err(|e| err(line, e.to_string()))?;
        let x = tree.find(&node).ok_or_else(|| err(line, "node outside the truncation"))?;
        let (n, value) = body[close + 1..]
            .split_once("->")
            .ok_or_else(|| err(line, "expected '<n> -> <value>'"))?;
        let n: usize = n.trim().parse().map_err(|_| err(line, "bad position"))?;
        if n >= d {
            return Err(err(line, format!("position {n} is not below the depth {d}")));
        }
        let value = value.trim();
        let v = if k == 1 {
            Elem::Num(value.parse().map_err(|_| err(line, format!("'{value}' is not a number")))?)
        } else {
            let names = &model.names[k as usize - 1];
            let idx = names
                .iter()
                .position(|s| s == value)
                .ok_or_else(|| err(line, format!("'{value}' is not a basis element of level {}", k - 1)))?;
            model.basis[k as usize - 1][idx].clone()
        };
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            let slot = &mut entries[y * d + n];
            match slot {
                Some(prev) if *prev != v => return Err(err(line, "conflicts with an earlier entry")),
                _ => *slot = Some(v.clone()),
            }
            stack.extend(&tree.children[y]);
        }
    }
    let level = level.ok_or_else(|| err(0, "empty table"))?;
    Ok(Table::new(level, model.depth(), entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TruncationParams;

    #[test]
    fn node_round_trip() {
        let m = Model::new(TruncationParams::new(2, 2, 2).unwrap()).unwrap();
        for node in &m.m().nodes {
            let text = print_node(&m, node);
            assert_eq!(&parse_node(&m, &text, 2).unwrap(), node);
        }
        assert_eq!(print_node(&m, &NodeB { comps: vec![vec![0], vec![0]] }), "<0|K1>");
    }

    #[test]
    fn table_round_trip() {
        let m = Model::new(TruncationParams::new(2, 2, 2).unwrap()).unwrap();
        for e in m.basis[1].iter().chain([&Elem::Fun(m.khat(2).unwrap())]) {
            let t = e.as_table().unwrap();
            let text = print_table(&m, t).unwrap();
            assert_eq!(&parse_table(&m, &text).unwrap(), &**t);
        }
    }

    #[test]
    fn conflicting_entries() {
        let m = Model::new(TruncationParams::new(1, 2, 2).unwrap()).unwrap();
        let e = parse_table(&m, "level 1\n<> 0 -> 0\n<1> 0 -> 1\n").unwrap_err();
        assert!(matches!(e, BsError::Format { line: 3, .. }));
    }
}
