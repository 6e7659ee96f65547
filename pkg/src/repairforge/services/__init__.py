# Makes 'services' a package.
