# Makes 'schemas' a package.
