"""Utility methods for use in the pmcorr command line tool."""

from . import args, errors, table
