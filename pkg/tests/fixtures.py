"""Shared input texts and small helpers for the test suite."""

SAMPLE_BIB = r'''@article{Ulam-1964,
    author = "Stein P. R. and  Ulam S. M.",
    title = "Non-linear transformation studies on
electronic computers",
    journal = "Rozprawy Mat.",
    year = "1964",
    volume = "39",
    pages = "1-66"}

@book{Poincare,
    author = "H. Poincar\'e",
    title = "Les m\'ethods nouvelles de la m\'ecanique c\'eleste",
    year = "1892",
    publisher = "Gauthier-Villars",
    address   = "Paris"}
'''

EXTRA_BIB_ENTRY = r'''@article{YangYu,
    author = "Yang Tse-Chung and Yu Chia-Fu",
    title = "Monomial, Gorenstein and Bass orders",
    journal = "J. Pure Appl. Algebra",
    year = "2015",
    volume = "219",
    pages = "767-778",
    number = "4"}
'''

HELLO_BST = r'''ENTRY
  { author
  }{}{}

FUNCTION {output.bibitem} {
  "\bibitem{" write$
  cite$ write$
  "}" write$ newline$}

FUNCTION {article}{
  output.bibitem
  author write$
  " (article)" write$
  newline$ }

FUNCTION {book}{
  output.bibitem
  author write$
  " (book)" write$
  newline$ }
READ

FUNCTION {begin.bib}{
  "\begin{thebibliography}{10}" write$
  newline$ newline$ }

EXECUTE {begin.bib}
ITERATE {call.type$}
FUNCTION {end.bib}{
  "\end{thebibliography}" write$ }
EXECUTE {end.bib}
'''

AUTHOR_SORT_FRAGMENT = r'''
FUNCTION {bib.sort.order}{
  author 'sort.key$ := }
ITERATE {bib.sort.order}
{SORT}
'''

LASTNAME_SORT_FRAGMENT = r'''
FUNCTION {bib.sort.order}{
  author #1 "{ll}" format.name$
  author num.names$ #1 =
  {skip$}
    { author #2 "{ll}" format.name$ *
    author num.names$ #2 =
    {skip$}
    {author #3 "{ll}" format.name$ *}
    if$}
  if$
  'sort.key$ := }
ITERATE {bib.sort.order}
{SORT}
'''

GUARDED_NUMBER_BST = r'''ENTRY
  { author number volume }{}{}

FUNCTION {output.bibitem} {
  "\bibitem{" write$
  cite$ write$
  "}" write$ newline$}

FUNCTION {article}{
  output.bibitem
  author write$
  number empty$
  {skip$}
  {", No. " write$ number write$}
  if$
  ", Vol. " write$ volume write$
  newline$ }

FUNCTION {book}{
  output.bibitem
  author write$
  " (book)" write$
  newline$ }
READ

FUNCTION {begin.bib}{
  "\begin{thebibliography}{10}" write$
  newline$ newline$ }

EXECUTE {begin.bib}
ITERATE {call.type$}
FUNCTION {end.bib}{
  "\end{thebibliography}" write$ }
EXECUTE {end.bib}
'''

EXPECTED_BBL = (
    "\\begin{thebibliography}{10}\n"
    "\n"
    "\\bibitem{Ulam-1964}\n"
    "Stein P. R. and Ulam S. M. (article)\n"
    "\\bibitem{Poincare}\n"
    "H. Poincar\\'e (book)\n"
    "\\end{thebibliography}\n"
)

# aux driving a bibtex run: cited keys plus the style/data declarations
BIBTEX_AUX = (
    "\\relax\n"
    "\\citation{Ulam-1964}\n"
    "\\citation{Poincare}\n"
    "\\citation{Ulam-1964}\n"
    "\\bibstyle{helloword}\n"
    "\\bibdata{my}\n"
)

# aux as the inline-bibliography document regenerates it
INLINE_AUX = (
    "\\relax\n"
    "\\citation{Ulam-1964}\n"
    "\\citation{Poincare}\n"
    "\\citation{Ulam-1964}\n"
    "\\bibcite{Poincare}{1}\n"
    "\\bibcite{Ulam-1964}{2}\n"
)

# aux written by a first pass over the external-mode document
EXTERNAL_AUX = (
    "\\relax\n"
    "\\citation{Ulam-1964}\n"
    "\\citation{Poincare}\n"
    "\\citation{Ulam-1964}\n"
    "\\bibstyle{plain}\n"
    "\\bibdata{my}\n"
)

INLINE_TEX = r'''\documentclass{article}
\begin{document}
We cite the article~\cite{Ulam-1964} by S. Ulam and the book~\cite{Poincare} by H. Poincar\'e. Then we cite the article~\cite{Ulam-1964} by S. Ulam again.

\begin{thebibliography}{10}

\bibitem{Poincare} H. Poincar\'e, {\it Les m\'ethods nouvelles de la m\'ecanique c\'eleste}, Paris: Gauthier-Villars, 1892.

\bibitem{Ulam-1964} P. Stein and S. Ulam, ``Non-linear transformation studies on electronic computers'', {\it Rozprawy Mat.}, Vol. {\bf 39}, pp.~1-66, 1964.

\end{thebibliography}
\end{document}
'''

EXTERNAL_TEX = r'''\documentclass{article}
\begin{document}
We cite the article \cite{Ulam-1964} and the book \cite{Poincare}.
\bibliographystyle{helloword}
\bibliography{my}
\end{document}
'''


def with_sort_fragment(style: str, fragment: str) -> str:
    """Insert a sort fragment right after the READ command of a style."""
    idx = style.index("READ") + len("READ")
    return style[:idx] + "\n" + fragment + style[idx:]


def write_files(dirpath, files: dict) -> None:
    for name, content in files.items():
        (dirpath / name).write_text(content, encoding="utf-8")


def bibitem_keys(bbl_text: str) -> list[str]:
    import re

    return re.findall(r"\\bibitem\{([^}]*)\}", bbl_text)


def cite_marks(rendered: str) -> list[str]:
    import re

    return re.findall(r"\[[0-9?,]+\]", rendered)
