# Makes 'constraints' a package.
