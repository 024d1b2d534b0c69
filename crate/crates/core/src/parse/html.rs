//! Lenient HTML reading for table extraction and structure comparison.
//!
//! Model output is routinely malformed, so the tree builder never fails:
//! unknown end tags are ignored, unclosed elements close at their parent's
//! boundary and a handful of implicit-close rules (`tr`, `td`/`th`, `li`, `p`)
//! mirror what browsers do for tables and lists.

use crate::model::{is_recognized_tag, normalize_cell, NormalizedTable, PadMode, StructureTree};

const VOID_TAGS: [&str; 15] = [
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source", "track", "wbr",
    "keygen",
];
const RAW_TEXT_TAGS: [&str; 3] = ["script", "style", "textarea"];
const BLOCK_TAGS: [&str; 22] = [
    "td", "th", "tr", "li", "p", "div", "br", "table", "ul", "ol", "h1", "h2", "h3", "h4", "h5", "h6", "pre", "thead",
    "tbody", "tfoot", "caption", "hr",
];
/// Deeper start tags are treated as void so pathological input stays bounded.
const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone)]
enum NodeKind {
    Root,
    Element { tag: String, attrs: Vec<(String, String)> },
    Text(String),
}

#[derive(Debug, Clone)]
struct Node {
    kind: NodeKind,
    children: Vec<usize>,
}

/// Arena DOM; node 0 is the document root and indices follow document order.
#[derive(Debug, Clone)]
struct Dom {
    nodes: Vec<Node>,
}

enum Token {
    Start { tag: String, attrs: Vec<(String, String)>, self_closing: bool },
    End(String),
    Text(String),
}

fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let semi = rest.bytes().take(12).position(|b| b == b';');
        let decoded = semi.and_then(|end| {
            let name = &rest[1..end];
            let ch = match name {
                "amp" => Some('&'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "quot" => Some('"'),
                "apos" => Some('\''),
                "nbsp" => Some(' '),
                _ => {
                    if let Some(hex) = name.strip_prefix("#x").or_else(|| name.strip_prefix("#X")) {
                        u32::from_str_radix(hex, 16).ok().and_then(char::from_u32)
                    } else if let Some(dec) = name.strip_prefix('#') {
                        dec.parse::<u32>().ok().and_then(char::from_u32)
                    } else {
                        None
                    }
                }
            };
            ch.map(|c| (c, end + 1))
        });
        match decoded {
            Some((c, len)) => {
                out.push(c);
                rest = &rest[len..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn tokenize(src: &str) -> Vec<Token> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut text_start = 0;

    let flush = |tokens: &mut Vec<Token>, from: usize, to: usize| {
        if to > from {
            tokens.push(Token::Text(decode_entities(&src[from..to])));
        }
    };

    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let next = bytes.get(i + 1).copied();
        match next {
            Some(b'!') => {
                flush(&mut tokens, text_start, i);
                let end = if src[i..].starts_with("<!--") {
                    src[i + 4..].find("-->").map_or(bytes.len(), |e| i + 4 + e + 3)
                } else {
                    src[i..].find('>').map_or(bytes.len(), |e| i + e + 1)
                };
                i = end;
                text_start = i;
            }
            Some(b'/') if bytes.get(i + 2).is_some_and(u8::is_ascii_alphabetic) => {
                flush(&mut tokens, text_start, i);
                let name_start = i + 2;
                let mut j = name_start;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'-') {
                    j += 1;
                }
                let tag = src[name_start..j].to_ascii_lowercase();
                i = src[j..].find('>').map_or(bytes.len(), |e| j + e + 1);
                text_start = i;
                tokens.push(Token::End(tag));
            }
            Some(c) if c.is_ascii_alphabetic() => {
                flush(&mut tokens, text_start, i);
                let name_start = i + 1;
                let mut j = name_start;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'-') {
                    j += 1;
                }
                let tag = src[name_start..j].to_ascii_lowercase();
                let (attrs, self_closing, end) = read_attributes(src, j);
                i = end;
                text_start = i;
                if RAW_TEXT_TAGS.contains(&tag.as_str()) && !self_closing {
                    let close = format!("</{tag}");
                    let lower_rest = src[i..].to_ascii_lowercase();
                    let body_end = lower_rest.find(&close).map_or(bytes.len(), |e| i + e);
                    let after = src[body_end..].find('>').map_or(bytes.len(), |e| body_end + e + 1);
                    let body = src[i..body_end].to_string();
                    tokens.push(Token::Start { tag: tag.clone(), attrs, self_closing: false });
                    if tag == "textarea" {
                        tokens.push(Token::Text(decode_entities(&body)));
                    }
                    tokens.push(Token::End(tag));
                    i = after;
                    text_start = i;
                } else {
                    tokens.push(Token::Start { tag, attrs, self_closing });
                }
            }
            _ => i += 1,
        }
    }
    flush(&mut tokens, text_start, bytes.len());
    tokens
}

/// Reads attributes up to the closing `>`; quoted values may contain `>`.
fn read_attributes(src: &str, mut i: usize) -> (Vec<(String, String)>, bool, usize) {
    let bytes = src.as_bytes();
    let mut attrs = Vec::new();
    let mut self_closing = false;
    loop {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            return (attrs, self_closing, i);
        }
        match bytes[i] {
            b'>' => return (attrs, self_closing, i + 1),
            b'/' => {
                self_closing = true;
                i += 1;
                continue;
            }
            _ => {}
        }
        self_closing = false;
        let name_start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'=' | b'>' | b'/') {
            i += 1;
        }
        if i == name_start {
            // stray character such as a lone quote
            i += src[i..].chars().next().map_or(1, char::len_utf8);
            continue;
        }
        let name = src[name_start..i].to_ascii_lowercase();
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let mut value = String::new();
        if bytes.get(i) == Some(&b'=') {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            match bytes.get(i) {
                Some(&q) if q == b'"' || q == b'\'' => {
                    let end = src[i + 1..].find(q as char).map_or(bytes.len(), |e| i + 1 + e);
                    value = decode_entities(&src[i + 1..end]);
                    i = (end + 1).min(bytes.len());
                }
                _ => {
                    let start = i;
                    while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'>' {
                        i += 1;
                    }
                    value = src[start..i].to_string();
                }
            }
        }
        attrs.push((name, value));
    }
}

impl Dom {
    fn tag(&self, idx: usize) -> Option<&str> {
        match &self.nodes[idx].kind {
            NodeKind::Element { tag, .. } => Some(tag),
            _ => None,
        }
    }

    fn attrs(&self, idx: usize) -> &[(String, String)] {
        match &self.nodes[idx].kind {
            NodeKind::Element { attrs, .. } => attrs,
            _ => &[],
        }
    }

    fn parse(src: &str) -> Dom {
        let mut dom = Dom { nodes: vec![Node { kind: NodeKind::Root, children: Vec::new() }] };
        let mut stack: Vec<usize> = vec![0];

        // position in `stack` of the innermost `target` above any `boundary`
        let find_open = |dom: &Dom, stack: &[usize], targets: &[&str], boundaries: &[&str]| -> Option<usize> {
            for (pos, &idx) in stack.iter().enumerate().rev() {
                let tag = dom.tag(idx).unwrap_or("");
                if targets.contains(&tag) {
                    return Some(pos);
                }
                if boundaries.contains(&tag) {
                    return None;
                }
            }
            None
        };

        for token in tokenize(src) {
            match token {
                Token::Text(text) => {
                    let parent = *stack.last().unwrap();
                    let id = dom.nodes.len();
                    dom.nodes.push(Node { kind: NodeKind::Text(text), children: Vec::new() });
                    dom.nodes[parent].children.push(id);
                }
                Token::Start { tag, attrs, self_closing } => {
                    let implicit = match tag.as_str() {
                        "tr" => find_open(&dom, &stack, &["tr"], &["table"]),
                        "td" | "th" => find_open(&dom, &stack, &["td", "th"], &["tr", "table"]),
                        "thead" | "tbody" | "tfoot" => {
                            find_open(&dom, &stack, &["thead", "tbody", "tfoot", "tr"], &["table"])
                        }
                        "li" => find_open(&dom, &stack, &["li"], &["ul", "ol"]),
                        "p" | "div" | "table" | "ul" | "ol" | "pre" | "h1" | "h2" | "h3" | "h4" | "h5" | "h6" => {
                            find_open(&dom, &stack, &["p"], &["td", "th", "li", "div", "table", "ul", "ol", "button"])
                        }
                        _ => None,
                    };
                    if let Some(pos) = implicit {
                        stack.truncate(pos);
                    }
                    let parent = *stack.last().unwrap();
                    let id = dom.nodes.len();
                    let is_void = VOID_TAGS.contains(&tag.as_str());
                    dom.nodes.push(Node { kind: NodeKind::Element { tag, attrs }, children: Vec::new() });
                    dom.nodes[parent].children.push(id);
                    if !is_void && !self_closing && stack.len() < MAX_DEPTH {
                        stack.push(id);
                    }
                }
                Token::End(tag) => {
                    let boundaries: &[&str] = match tag.as_str() {
                        "tr" | "td" | "th" | "thead" | "tbody" | "tfoot" => &["table"],
                        "li" => &["ul", "ol"],
                        _ => &[],
                    };
                    if let Some(pos) = find_open(&dom, &stack, &[tag.as_str()], boundaries) {
                        stack.truncate(pos);
                    }
                }
            }
        }
        dom
    }

    /// Text of a subtree with block-level boundaries turned into spaces.
    fn flat_text(&self, idx: usize) -> String {
        let mut out = String::new();
        let mut stack = vec![(idx, false)];
        while let Some((id, closing)) = stack.pop() {
            if closing {
                out.push(' ');
                continue;
            }
            match &self.nodes[id].kind {
                NodeKind::Text(t) => out.push_str(t),
                NodeKind::Element { tag, .. } => {
                    let block = BLOCK_TAGS.contains(&tag.as_str());
                    if block {
                        out.push(' ');
                        stack.push((id, true));
                    }
                    for &c in self.nodes[id].children.iter().rev() {
                        stack.push((c, false));
                    }
                }
                NodeKind::Root => {
                    for &c in self.nodes[id].children.iter().rev() {
                        stack.push((c, false));
                    }
                }
            }
        }
        normalize_cell(&out)
    }

    /// Descendants of `idx` tagged with one of `targets`, not descending into
    /// matches or into any `stop` element.
    fn collect(&self, idx: usize, targets: &[&str], stop: &[&str]) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.nodes[idx].children.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            let Some(tag) = self.tag(id) else { continue };
            if targets.contains(&tag) {
                out.push(id);
                continue;
            }
            if stop.contains(&tag) {
                continue;
            }
            stack.extend(self.nodes[id].children.iter().rev().copied());
        }
        out
    }

    fn has_ancestor_list(&self, parents: &[Option<usize>], mut idx: usize) -> bool {
        while let Some(p) = parents[idx] {
            if matches!(self.tag(p), Some("ul" | "ol")) {
                return true;
            }
            idx = p;
        }
        false
    }

    fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                parents[c] = Some(i);
            }
        }
        parents
    }

    fn structure(&self) -> StructureTree {
        // iterative post-order so deep documents cannot overflow the stack
        let mut built: Vec<Option<Vec<StructureTree>>> = vec![None; self.nodes.len()];
        let mut stack = vec![(0usize, false)];
        while let Some((id, expanded)) = stack.pop() {
            if !expanded {
                stack.push((id, true));
                for &c in self.nodes[id].children.iter().rev() {
                    stack.push((c, false));
                }
                continue;
            }
            let mut kids = Vec::new();
            for &c in &self.nodes[id].children {
                if let Some(sub) = built[c].take() {
                    kids.extend(sub);
                }
            }
            built[id] = Some(match &self.nodes[id].kind {
                NodeKind::Element { tag, .. } if is_recognized_tag(tag) => {
                    vec![StructureTree { tag: tag.clone(), children: kids }]
                }
                NodeKind::Text(_) => Vec::new(),
                _ => kids,
            });
        }
        StructureTree { tag: "div".to_string(), children: built[0].take().unwrap_or_default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct HtmlTables {
    pub tables: Vec<NormalizedTable>,
    pub diagnostics: Vec<String>,
}

/// Tables and lists together with the structure tree of one document.
#[derive(Debug, Clone, PartialEq)]
pub struct HtmlDocument {
    pub tables: Vec<NormalizedTable>,
    pub tree: StructureTree,
    pub diagnostics: Vec<String>,
}

impl HtmlDocument {
    /// Number of `th`, `td` and `li` elements.
    pub fn cell_count(&self) -> usize {
        self.tree.count_where(&|t| matches!(t, "td" | "th" | "li"))
    }
}

fn extract_tables(dom: &Dom) -> HtmlTables {
    let parents = dom.parents();
    let mut result = HtmlTables::default();
    let mut span_warned = false;

    for idx in 0..dom.nodes.len() {
        match dom.tag(idx) {
            Some("table") => {
                let mut rows: Vec<Vec<String>> = Vec::new();
                let mut header: Vec<String> = Vec::new();
                for (r, tr) in dom.collect(idx, &["tr"], &["table"]).into_iter().enumerate() {
                    let cells = dom.collect(tr, &["td", "th"], &["table"]);
                    if cells.is_empty() {
                        continue;
                    }
                    if !span_warned
                        && cells.iter().any(|&c| dom.attrs(c).iter().any(|(k, _)| k == "colspan" || k == "rowspan"))
                    {
                        result.diagnostics.push("colspan/rowspan attributes ignored".to_string());
                        span_warned = true;
                    }
                    let texts: Vec<String> = cells.iter().map(|&c| dom.flat_text(c)).collect();
                    if r == 0 && rows.is_empty() && cells.iter().all(|&c| dom.tag(c) == Some("th")) {
                        header = texts;
                    } else {
                        rows.push(texts);
                    }
                }
                if rows.is_empty() && header.is_empty() {
                    result.diagnostics.push("empty <table> skipped".to_string());
                    continue;
                }
                let table = NormalizedTable::new(header, rows, Vec::new(), PadMode::Pad).expect("pad mode never fails");
                if table.padded_cells > 0 {
                    result.diagnostics.push(format!("padded {} cells", table.padded_cells));
                }
                result.tables.push(table);
            }
            Some("ul" | "ol") if !dom.has_ancestor_list(&parents, idx) => {
                let items: Vec<Vec<String>> =
                    dom.collect(idx, &["li"], &["ul", "ol"]).into_iter().map(|li| vec![dom.flat_text(li)]).collect();
                if items.is_empty() {
                    continue;
                }
                result.tables.push(
                    NormalizedTable::new(Vec::new(), items, Vec::new(), PadMode::Pad).expect("pad mode never fails"),
                );
            }
            _ => {}
        }
    }
    if result.tables.is_empty() {
        result.diagnostics.push("no tables found".to_string());
    }
    result
}

/// Every `<table>` and top-level `<ul>`/`<ol>` as a normalized table, in
/// document order.
pub fn parse_html_tables(src: &str) -> HtmlTables {
    extract_tables(&Dom::parse(src))
}

/// The document filtered to recognized tags under a synthetic `div` root.
/// Unrecognized elements are transparent.
pub fn build_structure_tree(src: &str) -> StructureTree {
    Dom::parse(src).structure()
}

pub fn parse_html(src: &str) -> HtmlDocument {
    let dom = Dom::parse(src);
    let HtmlTables { tables, diagnostics } = extract_tables(&dom);
    HtmlDocument { tables, tree: dom.structure(), diagnostics }
}

/// Pre-order parenthesized form, e.g. `(table(tr(td)(td)))`.
pub fn serialize_structure_tree(tree: &StructureTree) -> String {
    let mut out = String::new();
    let mut stack = vec![Some(tree)];
    while let Some(item) = stack.pop() {
        match item {
            Some(node) => {
                out.push('(');
                out.push_str(&node.tag);
                stack.push(None);
                for child in node.children.iter().rev() {
                    stack.push(Some(child));
                }
            }
            None => out.push(')'),
        }
    }
    out
}
