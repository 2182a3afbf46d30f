# Sphinx configuration for the survmed documentation.
#
# Build with ``sphinx-build -b html docs/source docs/build`` and run the
# module doctests with ``sphinx-build -b doctest docs/source docs/build``.
import os
import sys

sys.path.insert(0, os.path.abspath('../..'))

# -- General ------------------------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.mathjax',
              'sphinx.ext.viewcode',
              'sphinx.ext.doctest']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'Survmed'
copyright = '2026, the Survmed developers'
author = 'Survmed developers'
version = '0.1'
release = '0.1.0'

exclude_patterns = []
pygments_style = 'sphinx'

# Members in source order.
autodoc_member_order = 'bysource'

# Headless backend for doctests that draw charts.
doctest_global_setup = '''
import matplotlib
matplotlib.use('Agg')
'''

# -- Output -------------------------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
htmlhelp_basename = 'Survmeddoc'

latex_documents = [
    (master_doc, 'Survmed.tex', 'Survmed Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'survmed', 'Survmed Documentation', [author], 1),
]

texinfo_documents = [
    (master_doc, 'Survmed', 'Survmed Documentation', author, 'Survmed',
     'Survival-incorporated quantiles for outcomes truncated by death.',
     'Miscellaneous'),
]
