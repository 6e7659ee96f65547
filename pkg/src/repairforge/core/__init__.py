# Makes 'core' a package.
