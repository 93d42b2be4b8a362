//! The license hierarchy: licensed scopes linked to their nearest licensed
//! ancestor.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::scan::{RawLicense, SourceKind};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LicenseTreeNode {
    /// Project-relative path of the scope, `/` for the project root. A
    /// referenced package shares the scope of the node that imports it.
    pub scope_path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub package: Option<String>,
    pub licenses: Vec<RawLicense>,
    #[serde(skip)]
    pub parent: Option<NodeId>,
    #[serde(skip)]
    pub children: Vec<NodeId>,
}

impl LicenseTreeNode {
    fn new(scope_path: String, package: Option<String>) -> Self {
        Self {
            scope_path,
            package,
            licenses: Vec::new(),
            parent: None,
            children: Vec::new(),
        }
    }

    /// Display path: the scope, plus `::package` for referenced packages.
    pub fn label(&self) -> String {
        match &self.package {
            Some(p) => format!("{}::{p}", self.scope_path),
            None => self.scope_path.clone(),
        }
    }
}

/// Arena-backed tree; node 0 is the project root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LicenseTree {
    nodes: Vec<LicenseTreeNode>,
}

pub const ROOT_SCOPE: &str = "/";

/// Directory containing `path` (`/a/b.py` gives `/a`, `/x` gives `/`).
pub fn parent_dir(path: &str) -> &str {
    match path.rfind('/') {
        Some(0) | None => ROOT_SCOPE,
        Some(i) => &path[..i],
    }
}

/// Whether `inner` lies within scope `outer` (a scope contains itself).
pub fn scope_contains(outer: &str, inner: &str) -> bool {
    outer == ROOT_SCOPE || inner == outer || inner.strip_prefix(outer).is_some_and(|rest| rest.starts_with('/'))
}

impl LicenseTree {
    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &LicenseTreeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[LicenseTreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    /// Nodes in post-order: every node after all of its descendants,
    /// siblings in scope order.
    pub fn post_order(&self) -> Vec<NodeId> {
        fn visit(tree: &LicenseTree, id: NodeId, out: &mut Vec<NodeId>) {
            for &c in tree.children(id) {
                visit(tree, c, out);
            }
            out.push(id);
        }
        let mut out = Vec::with_capacity(self.nodes.len());
        visit(self, self.root(), &mut out);
        out
    }

    /// Parent/child pairs in post-order of the child.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.post_order()
            .into_iter()
            .filter_map(|c| self.parent(c).map(|p| (p, c)))
            .collect()
    }

    pub fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent(id) {
            d += 1;
            id = p;
        }
        d
    }

    /// The node whose label is `label`.
    pub fn find(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label() == label)
    }

    /// Nested JSON rendering for `--dump-tree`; license texts are omitted.
    pub fn to_json(&self) -> serde_json::Value {
        fn node(tree: &LicenseTree, id: NodeId) -> serde_json::Value {
            let n = tree.node(id);
            let licenses: Vec<serde_json::Value> = n
                .licenses
                .iter()
                .map(|l| {
                    let mut v = serde_json::to_value(&l.source).expect("serializable");
                    if let Some(h) = &l.spdx_hint {
                        v["spdx_hint"] = serde_json::Value::String(h.clone());
                    }
                    v
                })
                .collect();
            let mut v = serde_json::json!({
                "scope_path": n.scope_path,
                "licenses": licenses,
                "children": tree.children(id).iter().map(|&c| node(tree, c)).collect::<Vec<_>>(),
            });
            if let Some(p) = &n.package {
                v["package"] = serde_json::Value::String(p.clone());
            }
            v
        }
        node(self, self.root())
    }

    /// The same licenses with every non-root node attached directly to the
    /// root, as a scanner unaware of nesting would see them.
    pub fn flattened(&self) -> LicenseTree {
        let mut tree = self.clone();
        for n in &mut tree.nodes {
            n.children.clear();
        }
        for id in 1..tree.nodes.len() {
            tree.nodes[id].parent = Some(0);
            tree.nodes[0].children.push(id);
        }
        tree.sort_children();
        tree
    }

    fn sort_children(&mut self) {
        let keys: Vec<(String, Option<String>)> = self
            .nodes
            .iter()
            .map(|n| (n.scope_path.clone(), n.package.clone()))
            .collect();
        for n in &mut self.nodes {
            n.children.sort_by(|a, b| keys[*a].cmp(&keys[*b]));
        }
    }
}

/// Arranges licenses into the hierarchy. Declared licenses scope their
/// directory, inline ones their file; each scope hangs below its nearest
/// licensed ancestor, so license-free directories vanish. Referenced
/// packages become children of the node that owns the importing file.
pub fn build_hierarchy(licenses: &[RawLicense]) -> LicenseTree {
    let mut by_scope: BTreeMap<String, Vec<RawLicense>> = BTreeMap::new();
    let mut referenced: Vec<&RawLicense> = Vec::new();
    for l in licenses {
        match l.source.kind {
            SourceKind::Declared => by_scope
                .entry(parent_dir(&l.source.path).to_string())
                .or_default()
                .push(l.clone()),
            SourceKind::Inline => by_scope.entry(l.source.path.clone()).or_default().push(l.clone()),
            SourceKind::Referenced => referenced.push(l),
        }
    }

    let mut tree = LicenseTree {
        nodes: vec![LicenseTreeNode::new(ROOT_SCOPE.to_string(), None)],
    };
    let mut id_of: BTreeMap<String, NodeId> = BTreeMap::new();
    id_of.insert(ROOT_SCOPE.to_string(), 0);
    if let Some(root) = by_scope.remove(ROOT_SCOPE) {
        tree.nodes[0].licenses = root;
    }
    // BTreeMap order visits every ancestor scope before its descendants.
    for (scope, ls) in by_scope {
        let parent = nearest_licensed(&id_of, &scope);
        let id = tree.nodes.len();
        let mut node = LicenseTreeNode::new(scope.clone(), None);
        node.licenses = ls;
        node.parent = Some(parent);
        tree.nodes.push(node);
        tree.nodes[parent].children.push(id);
        id_of.insert(scope, id);
    }

    let mut packages: BTreeMap<(NodeId, String), Vec<RawLicense>> = BTreeMap::new();
    for l in referenced {
        let importer = &l.source.path;
        let owner = id_of
            .get(importer)
            .copied()
            .unwrap_or_else(|| nearest_licensed(&id_of, importer));
        let package = l.source.origin.clone().unwrap_or_default();
        packages.entry((owner, package)).or_default().push(l.clone());
    }
    for ((owner, package), ls) in packages {
        let id = tree.nodes.len();
        let mut node = LicenseTreeNode::new(tree.nodes[owner].scope_path.clone(), Some(package));
        node.licenses = ls;
        node.parent = Some(owner);
        tree.nodes.push(node);
        tree.nodes[owner].children.push(id);
    }
    tree.sort_children();
    tree
}

/// Node of the longest strict ancestor of `path` that carries a license.
fn nearest_licensed(id_of: &BTreeMap<String, NodeId>, path: &str) -> NodeId {
    let mut dir = path;
    loop {
        if dir == ROOT_SCOPE {
            return 0;
        }
        dir = parent_dir(dir);
        if let Some(&id) = id_of.get(dir) {
            return id;
        }
    }
}
