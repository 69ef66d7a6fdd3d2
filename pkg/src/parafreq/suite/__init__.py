# Packaged scenario configs for the `parafreq paper-suite` command live here
# as *.json data files; see the package README for the schema.
