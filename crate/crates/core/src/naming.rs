//! Point names for constructed carriers.
//!
//! Product points are written `(a,b,...)` and disjoint-union points
//! `tag:name`. Component names are backslash-escaped so that both encodings
//! stay injective whatever names the inputs use.

fn escape(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for ch in name.chars() {
        if matches!(ch, '\\' | '(' | ')' | ',' | ':') {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

pub(crate) fn tuple_name<S: AsRef<str>>(parts: &[S]) -> String {
    let inner: Vec<String> = parts.iter().map(|p| escape(p.as_ref())).collect();
    format!("({})", inner.join(","))
}

pub(crate) fn tagged_name(tag: &str, name: &str) -> String {
    format!("{}:{}", escape(tag), escape(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings_are_injective_on_awkward_names() {
        assert_ne!(tuple_name(&["a,b", "c"]), tuple_name(&["a", "b,c"]));
        assert_ne!(tagged_name("x:y", "z"), tagged_name("x", "y:z"));
        assert_eq!(tuple_name::<&str>(&[]), "()");
        assert_eq!(tuple_name(&["0", "1"]), "(0,1)");
    }
}
