# Makes 'conflicts' a package.
