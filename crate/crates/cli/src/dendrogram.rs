//! Text rendering of a Ward linkage.

use cvdv_core::metrics::Linkage;

pub fn render(link: &Linkage, names: &[String]) -> String {
    let n = link.n;
    let mut out = String::new();
    let root = 2 * n - 2;
    walk(link, names, root, "", true, true, &mut out);
    out
}

fn walk(link: &Linkage, names: &[String], id: usize, prefix: &str, last: bool, top: bool, out: &mut String) {
    let n = link.n;
    let branch = if top {
        ""
    } else if last {
        "└── "
    } else {
        "├── "
    };
    if id < n {
        out.push_str(&format!("{prefix}{branch}{}\n", names[id]));
        return;
    }
    let m = &link.merges[id - n];
    out.push_str(&format!("{prefix}{branch}[{:.3}]\n", m.distance));
    let child_prefix = if top {
        prefix.to_string()
    } else {
        format!("{prefix}{}", if last { "    " } else { "│   " })
    };
    walk(link, names, m.a, &child_prefix, false, false, out);
    walk(link, names, m.b, &child_prefix, true, false, out);
}
