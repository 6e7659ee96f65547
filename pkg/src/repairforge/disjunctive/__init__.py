# Makes 'disjunctive' a package.
