# Makes 'canonical' a package.
