import pandas as pd

try:
    __IPYTHON__
    _in_ipython_session = True
except NameError:
    _in_ipython_session = False


def _display_results(title, content):
    """Helper function to display a table based on environment."""
    if _in_ipython_session:
        from IPython.display import display, HTML

        display(HTML(f"<p>{title}</p>"))
        display(HTML(content.to_html()))
    else:
        print(title)
        print(content.to_string())


def _report_table(report, formulas=None):
    """A MapReport (and optional closed-form values) as a two-column table."""
    computed = report.to_dict()
    table = pd.DataFrame({"computed": pd.Series(computed, dtype="object")})
    if formulas is not None:
        table["formula"] = pd.Series({k: formulas.get(k, "") for k in computed}, dtype="object")
    return table


def _records_table(records, index=None):
    """A list of dicts as a DataFrame, optionally indexed by one column."""
    table = pd.DataFrame.from_records(records)
    if index is not None and not table.empty:
        table = table.set_index(index)
    return table
