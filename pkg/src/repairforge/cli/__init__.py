# Makes 'cli' a package.
