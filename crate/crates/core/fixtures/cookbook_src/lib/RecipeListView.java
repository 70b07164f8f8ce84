package lib;

public class RecipeListView {
    private CookBookPanel panel;
}
