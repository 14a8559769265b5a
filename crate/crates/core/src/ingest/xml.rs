use quick_xml::escape::escape;
use quick_xml::events::Event;
use quick_xml::Reader;
use serde::Serialize;

use crate::error::{Error, Result};

/// One element of a parsed document. Ids follow document order from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XmlElement {
    pub id: u32,
    pub parent: Option<u32>,
    pub name: String,
    /// Trimmed text of a text-only element.
    pub content: Option<String>,
    pub children: Vec<u32>,
    /// Bytes of the canonical serialization; 0 until [`compute_sizes`] runs.
    pub size: u64,
}

/// Element tree of one document; `elements[i]` has id `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XmlTree {
    elements: Vec<XmlElement>,
}

/// One tuple of the edge-table encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRow {
    #[serde(rename = "ID")]
    pub id: u32,
    #[serde(rename = "parentID")]
    pub parent_id: Option<u32>,
    pub name: String,
    pub content: Option<String>,
}

impl XmlTree {
    pub fn elements(&self) -> &[XmlElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&XmlElement> {
        id.checked_sub(1).and_then(|i| self.elements.get(i as usize))
    }

    pub fn edge_rows(&self) -> Vec<EdgeRow> {
        self.elements
            .iter()
            .map(|e| EdgeRow {
                id: e.id,
                parent_id: e.parent,
                name: e.name.clone(),
                content: e.content.clone(),
            })
            .collect()
    }

    /// Number of elements in the subtree rooted at `id`.
    pub fn subtree_count(&self, id: u32) -> usize {
        let mut count = 0;
        let mut stack = vec![id];
        while let Some(i) = stack.pop() {
            count += 1;
            stack.extend(&self.elements[i as usize - 1].children);
        }
        count
    }
}

fn parse_error(reader: &Reader<&[u8]>, message: impl ToString) -> Error {
    Error::XmlParse {
        offset: reader.error_position(),
        message: message.to_string(),
    }
}

/// Parses an element/text document into its element tree.
///
/// Attributes, comments and processing instructions are ignored. Text that is
/// only whitespace is dropped; an element holding both text and child
/// elements is rejected.
pub fn parse_xml(document: &[u8]) -> Result<XmlTree> {
    let mut reader = Reader::from_reader(document);
    let mut elements: Vec<XmlElement> = Vec::new();
    let mut texts: Vec<String> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    let mut warned_attrs = false;

    loop {
        let event = reader
            .read_event()
            .map_err(|e| parse_error(&reader, e))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                if stack.is_empty() && !elements.is_empty() {
                    return Err(Error::InvalidDocument(format!(
                        "multiple root elements (second starts near byte {})",
                        reader.buffer_position()
                    )));
                }
                let name = std::str::from_utf8(e.name().as_ref())
                    .map_err(|err| parse_error(&reader, err))?
                    .to_owned();
                if !warned_attrs && e.attributes().next().is_some() {
                    log::warn!("attributes are ignored (first seen on <{name}>)");
                    warned_attrs = true;
                }
                let id = elements.len() as u32 + 1;
                let parent = stack.last().copied();
                if let Some(p) = parent {
                    elements[p as usize - 1].children.push(id);
                }
                elements.push(XmlElement {
                    id,
                    parent,
                    name,
                    content: None,
                    children: Vec::new(),
                    size: 0,
                });
                texts.push(String::new());
                if matches!(event, Event::Start(_)) {
                    stack.push(id);
                }
            }
            Event::End(_) => {
                let id = stack
                    .pop()
                    .ok_or_else(|| parse_error(&reader, "unexpected closing tag"))?;
                let el = &mut elements[id as usize - 1];
                let text = std::mem::take(&mut texts[id as usize - 1]);
                let text = text.trim();
                if !text.is_empty() {
                    if !el.children.is_empty() {
                        return Err(Error::InvalidDocument(format!(
                            "element {id} <{}> mixes text and child elements",
                            el.name
                        )));
                    }
                    el.content = Some(text.to_owned());
                }
            }
            Event::Text(t) => {
                let raw = t.unescape().map_err(|e| parse_error(&reader, e))?;
                match stack.last() {
                    Some(&id) => texts[id as usize - 1].push_str(&raw),
                    None if raw.trim().is_empty() => {}
                    None => {
                        return Err(Error::InvalidDocument(
                            "text outside the root element".into(),
                        ))
                    }
                }
            }
            Event::CData(c) => {
                let raw = c.into_inner();
                let raw = std::str::from_utf8(&raw).map_err(|e| parse_error(&reader, e))?;
                match stack.last() {
                    Some(&id) => texts[id as usize - 1].push_str(raw),
                    None => {
                        return Err(Error::InvalidDocument(
                            "CDATA outside the root element".into(),
                        ))
                    }
                }
            }
            Event::Eof => break,
            Event::Comment(_) | Event::PI(_) | Event::Decl(_) | Event::DocType(_) => {}
        }
    }

    if !stack.is_empty() {
        return Err(Error::XmlParse {
            offset: reader.buffer_position(),
            message: format!("{} unclosed element(s) at end of input", stack.len()),
        });
    }
    if elements.is_empty() {
        return Err(Error::InvalidDocument("no root element".into()));
    }
    Ok(XmlTree { elements })
}

/// Canonical text of the subtree at `id`. A text-only element renders on one
/// line; an element with children puts every tag on its own line with no
/// indentation.
pub fn serialize_subtree(tree: &XmlTree, id: u32) -> Result<String> {
    if tree.get(id).is_none() {
        return Err(Error::InvalidInput(format!("unknown element {id}")));
    }
    let mut out = String::new();
    write_element(tree, id, &mut out);
    Ok(out)
}

fn write_element(tree: &XmlTree, id: u32, out: &mut String) {
    let el = &tree.elements[id as usize - 1];
    out.push('<');
    out.push_str(&el.name);
    out.push('>');
    if el.children.is_empty() {
        if let Some(text) = &el.content {
            out.push_str(&escape(text.as_str()));
        }
    } else {
        for &c in &el.children {
            out.push('\n');
            write_element(tree, c, out);
        }
        out.push('\n');
    }
    out.push_str("</");
    out.push_str(&el.name);
    out.push('>');
}

/// Sets every element's size to the byte length of its canonical
/// serialization, computed bottom-up.
pub fn compute_sizes(mut tree: XmlTree) -> XmlTree {
    for i in (0..tree.elements.len()).rev() {
        let el = &tree.elements[i];
        let tags = 2 * el.name.len() as u64 + 5;
        let body = if el.children.is_empty() {
            el.content.as_deref().map_or(0, |t| escape(t).len() as u64)
        } else {
            // One newline before each child plus one before the closing tag.
            el.children
                .iter()
                .map(|&c| tree.elements[c as usize - 1].size + 1)
                .sum::<u64>()
                + 1
        };
        tree.elements[i].size = tags + body;
    }
    tree
}
