# Makes 'families' a package.
