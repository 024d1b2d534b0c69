//! Prompt templates.

use crate::model::TableFormat;

/// Pairwise similarity prompt; `{input1}` and `{input2}` are substituted.
pub const GPTSCORE_TEMPLATE: &str = r#"We want to evaluate how similar the following tables/data structures are.

Table 1:

```
{input1}
```

Table 2:

```
{input2}
```

Based on the above, we wanted to determine if the above tables are similar. Ideally, they should have identical content and structure. Score the "content similarity" and "structural similarity" between 0 and 10.

- Content similarity: 10 if the contents of the table cells are identical, 0 if they are entirely different. If about 50% of the cells have the same data, the score should be 5.

- Structural similarity: 10 if the tables have the same structure (e.g. same column and rows with identical ordering, same alignment, etc) although text formatting differences can be ignored (e.g. colors, font).

Output a JSON object such as the following:

```json
{
  "content_similarity": ...
  "structural_similarity": ...
}
```

Think carefully, and then output the scores."#;

const RAW_DESCRIPTION: &str = "Describe details about the given text. First, give the number of tables, and then for each table, describe its format such as the number of columns and rows, column names, and row names.";

const HTML_DESCRIPTION: &str = "Describe the format of this HTML in detail according to each HTML tag of the following HTML code. Be careful and make sure don't miss any HTML tags. Please use more than 300 words to explain the format. Use specific numbers rather than being vague about several.";

const LATEX_DESCRIPTION: &str = r#"Describe the detailed format of a given latex table according to the commands and tags with more than 500 words. Include: Whether there is table border lines? How is text alignment? What are table attributes? Whether to bold? Whether to add \ref? Please clearly explain whether there are horizontal and vertical lines bordering each row and column. Say anything about a special "\" format token in latex if there is. Don't display latex code directly. Use natural language. And provide enough format information for me to recreate this table based on your output description."#;

/// Fills the similarity template. Substitution is single pass, so placeholder
/// text inside either table is left alone.
pub fn build_gptscore_prompt(table1: &str, table2: &str) -> String {
    let (head, rest) = GPTSCORE_TEMPLATE.split_once("{input1}").expect("template has {input1}");
    let (middle, tail) = rest.split_once("{input2}").expect("template has {input2}");
    let mut out = String::with_capacity(GPTSCORE_TEMPLATE.len() + table1.len() + table2.len());
    out.push_str(head);
    out.push_str(table1);
    out.push_str(middle);
    out.push_str(table2);
    out.push_str(tail);
    out
}

pub fn description_instruction(fmt: TableFormat) -> &'static str {
    match fmt {
        TableFormat::RawText => RAW_DESCRIPTION,
        TableFormat::Html => HTML_DESCRIPTION,
        TableFormat::Latex => LATEX_DESCRIPTION,
    }
}

/// Format-description instruction followed by a blank line and the payload.
pub fn build_description_prompt(fmt: TableFormat, payload: &str) -> String {
    format!("{}\n\n{}", description_instruction(fmt), payload)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gptscore_prompt_shape() {
        let p = build_gptscore_prompt("A", "B");
        assert!(p.contains("- Content similarity: 10 if"));
        assert!(p.contains("- Structural similarity: 10 if"));
        assert!(p.contains("```json\n{\n"));
        assert!(p.ends_with("Think carefully, and then output the scores."));
        assert!(p.find("```\nA\n```").unwrap() < p.find("```\nB\n```").unwrap());
    }

    #[test]
    fn placeholders_in_tables_are_not_expanded() {
        let p = build_gptscore_prompt("{input2}", "x");
        assert_eq!(p.matches("{input2}").count(), 1);
        assert!(p.contains("```\n{input2}\n```\n\nTable 2:\n\n```\nx\n```"));
    }

    #[test]
    fn description_prompts() {
        assert!(
            build_description_prompt(TableFormat::RawText, "t").starts_with("Describe details about the given text.")
        );
        assert!(build_description_prompt(TableFormat::Html, "h").contains("more than 300 words"));
        let latex = build_description_prompt(TableFormat::Latex, "l");
        assert!(latex.contains("more than 500 words"));
        assert!(latex.contains("Whether to add \\ref?"));
        assert!(latex.ends_with("description.\n\nl"));
    }
}
