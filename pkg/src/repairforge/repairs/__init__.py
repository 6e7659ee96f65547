# Makes 'repairs' a package.
